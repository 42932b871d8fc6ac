#pragma once

#include <vector>

#include "tmscat/dsao.hpp"
#include "tmscat/geometry.hpp"
#include "tmscat/linalg.hpp"

namespace tmscat {

struct Excitation {
  double phi_inc = 0.0;  // propagation direction, radians from +x
  cplx E0{1.0, 0.0};
  double freq = 0.0;
};

// Per-segment pulse values of the boundary field and the equivalent current.
struct SolutionFields {
  CVector E;
  CVector J;
  ConditionEntry final_system;
};

struct RcsCurve {
  std::vector<double> phi;    // radians, strictly increasing in [0, 2 pi)
  std::vector<double> sigma;  // echo width, m

  std::size_t size() const { return phi.size(); }
};

std::vector<double> uniform_angles(int n);

// int_segment E0 exp(-j k0 (x cos phi + y sin phi)) dr, closed form.
CVector incident_vector(const DiscretizedBoundary& db, cplx k0, const Excitation& exc);

// (L - G_ext Ys) E = E_inc, J = Ys E. With G_ext = -P-hat this is the
// L + P-hat Ys system.
SolutionFields solve_exterior(const AdmittanceOperator& Ys, const CMatrix& G_ext, const Eigen::VectorXd& L,
                              const CVector& E_inc, const std::string& label, const SolveLog& log = {});

// Bare PEC: tested EFIE 0 = E_inc + G_ext J.
SolutionFields solve_pec_efie(const CMatrix& G_ext, const CVector& E_inc, const SolveLog& log = {});

// F(phi) with E^s -> F sqrt(2/(pi k0 rho)) e^{-j(k0 rho - pi/4)}.
cplx far_field(const CVector& J, const DiscretizedBoundary& db, cplx k0, double omega_mu0, double phi);

// sigma = 4 |F|^2 / (k0 |E0|^2)
RcsCurve rcs(const CVector& J, const DiscretizedBoundary& db, cplx k0, double omega_mu0,
             const std::vector<double>& angles, cplx E0 = 1.0);

// sum |a - b|^2 / sum |b|^2 on linear values.
double relative_error(const RcsCurve& calc, const RcsCurve& ref);

inline double to_db(double sigma) { return 10.0 * std::log10(sigma); }

}  // namespace tmscat
