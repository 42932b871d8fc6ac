#pragma once

#include "tmscat/geometry.hpp"
#include "tmscat/types.hpp"

namespace tmscat {

// Homogeneous-medium kernel: G = -(j/4) H0^(2)(k rho).
struct Kernel {
  cplx k;
  double omega;
  double mu;  // H/m

  double omega_mu() const { return omega * mu; }
};

Kernel make_kernel(const Medium& m, double freq);

cplx green(cplx k, double rho);

struct QuadratureOptions {
  int order_bump = 0;  // extra Gauss points per segment, all rules
};

// Galerkin pulse-pulse operators for one test/source boundary pair.
//   P[m,n] = int_m int_n j omega mu G
//   U[m,n] = int_m int_n k (d.n')/|d| (-j/4) H1^(2)(k|d|),  d = r' - r
// Coincident segments: P by analytic log subtraction, U = 0. Segments that
// share an endpoint use a Duffy split; other pairs are subdivided until
// well separated.
struct OperatorSet {
  Eigen::VectorXd L;  // lengths of the test boundary
  CMatrix P;
  CMatrix U;

  CMatrix G() const { return -P; }
};

OperatorSet assemble(const DiscretizedBoundary& test, const DiscretizedBoundary& source,
                     const Kernel& kern, const QuadratureOptions& opt = {});

// Self operators on one boundary; exploits P = P^T.
OperatorSet assemble_self(const DiscretizedBoundary& db, const Kernel& kern,
                          const QuadratureOptions& opt = {});

inline Eigen::VectorXd assemble_L(const DiscretizedBoundary& db) { return db.lengths; }

CMatrix assemble_P(const DiscretizedBoundary& test, const DiscretizedBoundary& source,
                   const Kernel& kern, const QuadratureOptions& opt = {});
CMatrix assemble_U(const DiscretizedBoundary& test, const DiscretizedBoundary& source,
                   const Kernel& kern, const QuadratureOptions& opt = {});
// Current-source operator: G = -P.
CMatrix assemble_G(const DiscretizedBoundary& test, const DiscretizedBoundary& source,
                   const Kernel& kern, const QuadratureOptions& opt = {});

// int_0^l int_0^l H0^(2)(k|s - s'|) ds ds' for one flat segment.
cplx self_h0_integral(cplx k, double l);

}  // namespace tmscat
