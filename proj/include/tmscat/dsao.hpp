#pragma once

#include <string>
#include <vector>

#include "tmscat/diagnostics.hpp"
#include "tmscat/geometry.hpp"
#include "tmscat/linalg.hpp"
#include "tmscat/operators.hpp"

namespace tmscat {

// Y_s on one (possibly multi-contour) boundary. `blocks` lists the diagonal
// block sizes; off-block entries are zero by construction.
struct AdmittanceOperator {
  CMatrix Ys;
  std::vector<int> blocks;
  int depth = 0;
  std::string boundary;

  int size() const { return int(Ys.rows()); }
};

// A * Ys and Ys-aware flop count (blockwise).
CMatrix mul_admittance(const CMatrix& A, const AdmittanceOperator& Y, const SolveLog& log = {});

// Y = P^{-1} (L/2 - U).
CMatrix sao_single(const OperatorSet& ops, const std::string& label = "P", const SolveLog& log = {});

AdmittanceOperator dsao_single(const CMatrix& Y, const CMatrix& Y_hat);

// Operators of layer i (kernel of medium i), gamma_{i-1} inner, gamma_i outer.
struct LayerOperators {
  Eigen::VectorXd L_prev;  // lengths on gamma_{i-1}
  CMatrix P_prev, U_prev;  // tested on gamma_{i-1}, source gamma_i
  CMatrix G_prev;          // tested on gamma_{i-1}, current on gamma_{i-1}
  CMatrix G_this;          // tested on gamma_i, current on gamma_{i-1}
  OperatorSet self;        // gamma_i on itself
};

LayerOperators layer_operators(const DiscretizedBoundary& inner, const DiscretizedBoundary& outer,
                               const Kernel& kern, const CMatrix* G_prev_reuse = nullptr,
                               const QuadratureOptions& opt = {});

// Labels follow the recursion depth i, e.g. "V_1^(2)".
struct StepLabels {
  std::string V, S, hat;
  static StepLabels layer(int i);
  static StepLabels pec(int i);
};

// V = (L_{i-1} - G_{i-1} Y_prev)^{-1}, F = G_i Y_prev V,
// Y_i = (P_i + F P_{i-1})^{-1} (L_i/2 - U_i - F U_{i-1}), Y_s = Y_i - Yhat_i.
AdmittanceOperator layer_step(const AdmittanceOperator& prev, const LayerOperators& ops,
                              const OperatorSet& hat, const StepLabels& labels, const SolveLog& log = {});

// PEC core gamma_1 inside layer 2: eliminates J_1 through the zero-field
// condition on gamma_1.
AdmittanceOperator pec_coated(const LayerOperators& ops, const OperatorSet& hat, const StepLabels& labels,
                              const SolveLog& log = {});

AdmittanceOperator assemble_multi(const std::vector<AdmittanceOperator>& blocks);

// Fictitious boundary in the background: layer_step with hat = self.
AdmittanceOperator extend_same_medium(const AdmittanceOperator& Ys_n, const LayerOperators& ops,
                                      const StepLabels& labels, const SolveLog& log = {});

struct DsaoOptions {
  bool conditions = true;
  QuadratureOptions quadrature;
};

struct DsaoResult {
  AdmittanceOperator Ys;             // on the outermost boundary
  DiscretizedBoundary outer;         // where Ys lives (union for bare groups)
  bool bare_pec = false;             // solve by the direct EFIE instead
  std::vector<LayerSolveRecord> records;
  double linalg_flops = 0.0;
  double assembly_entries = 0.0;     // kernel-matrix entries filled
};

DsaoResult build_dsao(const Scene& scene, double freq, const SceneMesh& mesh, const DsaoOptions& opt = {});

}  // namespace tmscat
