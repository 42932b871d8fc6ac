#include "tmscat/dsao.hpp"

#include <deque>
#include <optional>

namespace tmscat {

CMatrix mul_admittance(const CMatrix& A, const AdmittanceOperator& Y, const SolveLog& log) {
  if (Y.blocks.size() <= 1) return matmul(A, Y.Ys, log);
  CMatrix out = CMatrix::Zero(A.rows(), Y.size());
  int off = 0;
  for (int nb : Y.blocks) {
    out.middleCols(off, nb) = A.middleCols(off, nb) * Y.Ys.block(off, off, nb, nb);
    log.add_flops(flops::matmul(double(A.rows()), nb, nb));
    off += nb;
  }
  return out;
}

namespace {

CMatrix half_L_minus(const Eigen::VectorXd& L, const CMatrix& U) {
  CMatrix R = -U;
  R.diagonal() += 0.5 * L.cast<cplx>();
  return R;
}

}  // namespace

CMatrix sao_single(const OperatorSet& ops, const std::string& label, const SolveLog& log) {
  return lu_solve(ops.P, half_L_minus(ops.L, ops.U), label, log);
}

AdmittanceOperator dsao_single(const CMatrix& Y, const CMatrix& Y_hat) {
  if (Y.rows() != Y_hat.rows() || Y.cols() != Y_hat.cols())
    throw std::invalid_argument("dsao_single: dimension mismatch");
  AdmittanceOperator a;
  a.Ys = Y - Y_hat;
  a.blocks = {int(Y.rows())};
  a.depth = 1;
  return a;
}

LayerOperators layer_operators(const DiscretizedBoundary& inner, const DiscretizedBoundary& outer,
                               const Kernel& kern, const CMatrix* G_prev_reuse,
                               const QuadratureOptions& opt) {
  LayerOperators ops;
  OperatorSet cross = assemble(inner, outer, kern, opt);
  ops.L_prev = inner.lengths;
  ops.P_prev = cross.P;
  ops.U_prev = cross.U;
  // kernel symmetry: P(gamma_i, gamma_{i-1}) = P(gamma_{i-1}, gamma_i)^T
  ops.G_this = -cross.P.transpose();
  ops.G_prev = G_prev_reuse ? *G_prev_reuse : CMatrix(-assemble_self(inner, kern, opt).P);
  ops.self = assemble_self(outer, kern, opt);
  return ops;
}

StepLabels StepLabels::layer(int i) {
  const std::string a = std::to_string(i), b = std::to_string(i - 1);
  return {"V_" + b + "^(" + a + ")", "P_" + a + "^(" + a + ")+F_" + a + "^(" + a + ")P_" + b + "^(" + a + ")",
          "Phat_" + a + "^(" + a + ")"};
}

StepLabels StepLabels::pec(int i) {
  const std::string a = std::to_string(i), b = std::to_string(i - 1);
  return {"G_" + b + "^(" + a + ")",
          "P_" + a + "^(" + a + ")-G_" + a + "^(" + a + ")(G_" + b + "^(" + a + "))^-1P_" + b + "^(" + a + ")",
          "Phat_" + a + "^(" + a + ")"};
}

AdmittanceOperator layer_step(const AdmittanceOperator& prev, const LayerOperators& ops,
                              const OperatorSet& hat, const StepLabels& labels, const SolveLog& log) {
  CMatrix A = -mul_admittance(ops.G_prev, prev, log);
  A.diagonal() += ops.L_prev.cast<cplx>();
  CMatrix T = mul_admittance(ops.G_this, prev, log);
  CMatrix F = lu_solve_right(A, T, labels.V, log);
  CMatrix S = ops.self.P + matmul(F, ops.P_prev, log);
  CMatrix R = half_L_minus(ops.self.L, ops.self.U) - matmul(F, ops.U_prev, log);
  CMatrix Y = lu_solve(S, R, labels.S, log);
  CMatrix Yhat = sao_single(hat, labels.hat, log);
  AdmittanceOperator out;
  out.Ys = Y - Yhat;
  out.blocks = {int(Y.rows())};
  out.depth = prev.depth + 1;
  return out;
}

AdmittanceOperator pec_coated(const LayerOperators& ops, const OperatorSet& hat, const StepLabels& labels,
                              const SolveLog& log) {
  const int m1 = int(ops.P_prev.rows()), m2 = int(ops.P_prev.cols());
  CMatrix rhs(m1, 2 * m2);
  rhs << ops.P_prev, ops.U_prev;
  CMatrix X = lu_solve(ops.G_prev, rhs, labels.V, log);
  CMatrix GX = matmul(ops.G_this, X, log);
  CMatrix S = ops.self.P - GX.leftCols(m2);
  CMatrix R = half_L_minus(ops.self.L, ops.self.U) + GX.rightCols(m2);
  CMatrix Y = lu_solve(S, R, labels.S, log);
  CMatrix Yhat = sao_single(hat, labels.hat, log);
  AdmittanceOperator out;
  out.Ys = Y - Yhat;
  out.blocks = {m2};
  out.depth = 2;
  return out;
}

AdmittanceOperator assemble_multi(const std::vector<AdmittanceOperator>& blocks) {
  if (blocks.size() == 1) return blocks.front();
  int n = 0, depth = 0;
  for (const auto& b : blocks) {
    n += b.size();
    depth = std::max(depth, b.depth);
  }
  AdmittanceOperator out;
  out.Ys = CMatrix::Zero(n, n);
  int off = 0;
  for (const auto& b : blocks) {
    out.Ys.block(off, off, b.size(), b.size()) = b.Ys;
    out.blocks.push_back(b.size());
    off += b.size();
  }
  out.depth = depth;
  return out;
}

AdmittanceOperator extend_same_medium(const AdmittanceOperator& Ys_n, const LayerOperators& ops,
                                      const StepLabels& labels, const SolveLog& log) {
  return layer_step(Ys_n, ops, ops.self, labels, log);
}

namespace {

struct ChainLayer {
  const DiscretizedBoundary* db;
  Medium medium;   // inside this boundary
  Medium outside;  // just outside it
  bool pec;
};

struct ChainState {
  AdmittanceOperator Y;
  DiscretizedBoundary db;
  std::optional<CMatrix> hatP;  // P-hat on db, kernel = `hat_medium`
  Medium hat_medium;
  int depth = 0;
  bool bare_pec = false;
};

class Builder {
 public:
  Builder(double freq, const DsaoOptions& opt) : freq_(freq), opt_(opt) {}

  SolveLog log_for(int depth) {
    records_.push_back(LayerSolveRecord{depth, {}, 0.0});
    return SolveLog{&records_.back(), opt_.conditions};
  }

  OperatorSet self_ops(const DiscretizedBoundary& db, const Medium& m) {
    entries_ += double(db.size()) * db.size();
    return assemble_self(db, make_kernel(m, freq_), opt_.quadrature);
  }

  // Depth-1 state for the innermost element; `tag` is the label subscript.
  ChainState base(const std::vector<ChainLayer>& chain, std::size_t& next, const std::string& tag) {
    ChainState st;
    const ChainLayer& c0 = chain[0];
    if (c0.pec) {
      if (chain.size() < 2) {
        st.db = *c0.db;
        st.bare_pec = true;
        next = 1;
        return st;
      }
      const ChainLayer& c1 = chain[1];
      SolveLog log = log_for(2);
      LayerOperators ops = layer_ops(*c0.db, *c1.db, c1.medium, nullptr);
      OperatorSet hat = c1.outside == c1.medium ? ops.self : self_ops(*c1.db, c1.outside);
      st.Y = pec_coated(ops, hat, StepLabels::pec(2), log);
      st.db = *c1.db;
      st.hatP = hat.P;
      st.hat_medium = c1.outside;
      st.depth = 2;
      next = 2;
      return st;
    }
    SolveLog log = log_for(1);
    OperatorSet self = self_ops(*c0.db, c0.medium);
    OperatorSet hat = c0.outside == c0.medium ? self : self_ops(*c0.db, c0.outside);
    CMatrix Y = sao_single(self, "P_" + tag + "^(1)", log);
    CMatrix Yh = sao_single(hat, "Phat_" + tag + "^(1)", log);
    st.Y = dsao_single(Y, Yh);
    st.db = *c0.db;
    st.hatP = hat.P;
    st.hat_medium = c0.outside;
    st.depth = 1;
    next = 1;
    return st;
  }

  LayerOperators layer_ops(const DiscretizedBoundary& inner, const DiscretizedBoundary& outer,
                           const Medium& m, const CMatrix* reuse) {
    entries_ += 2.0 * inner.size() * outer.size() + double(outer.size()) * outer.size();
    if (!reuse) entries_ += double(inner.size()) * inner.size();
    return layer_operators(inner, outer, make_kernel(m, freq_), reuse, opt_.quadrature);
  }

  void step(ChainState& st, const ChainLayer& c) {
    const int depth = st.depth + 1;
    SolveLog log = log_for(depth);
    std::optional<CMatrix> reuse;
    if (st.hatP && st.hat_medium == c.medium) reuse = CMatrix(-*st.hatP);
    LayerOperators ops = layer_ops(st.db, *c.db, c.medium, reuse ? &*reuse : nullptr);
    AdmittanceOperator Y;
    OperatorSet hat;
    if (c.outside == c.medium) {
      hat = ops.self;
      Y = extend_same_medium(st.Y, ops, StepLabels::layer(depth), log);
    } else {
      hat = self_ops(*c.db, c.outside);
      Y = layer_step(st.Y, ops, hat, StepLabels::layer(depth), log);
    }
    st.Y = std::move(Y);
    st.Y.depth = depth;
    st.db = *c.db;
    st.hatP = hat.P;
    st.hat_medium = c.outside;
    st.depth = depth;
  }

  void run(ChainState& st, const std::vector<ChainLayer>& chain, std::size_t from) {
    for (std::size_t i = from; i < chain.size(); ++i) step(st, chain[i]);
  }

  std::vector<LayerSolveRecord> records() const {
    std::vector<LayerSolveRecord> out(records_.begin(), records_.end());
    return out;
  }
  double entries() const { return entries_; }

 private:
  double freq_;
  DsaoOptions opt_;
  std::deque<LayerSolveRecord> records_;
  double entries_ = 0.0;
};

}  // namespace

DsaoResult build_dsao(const Scene& scene, double freq, const SceneMesh& mesh, const DsaoOptions& opt) {
  Builder b(freq, opt);
  const bool multi = scene.groups.size() > 1;
  std::vector<ChainLayer> tail;
  for (std::size_t i = 0; i < scene.shells.size(); ++i)
    tail.push_back({&mesh.shells[i], scene.shells[i].medium, shell_outer_medium(scene, int(i)), false});
  if (mesh.fictitious) tail.push_back({&*mesh.fictitious, scene.background, scene.background, false});

  ChainState st;
  if (!multi) {
    std::vector<ChainLayer> chain;
    const auto& layers = scene.groups[0].layers;
    for (std::size_t l = 0; l < layers.size(); ++l)
      chain.push_back({&mesh.groups[0][l], layers[l].medium, outer_medium(scene, 0, int(l)), layers[l].pec});
    chain.insert(chain.end(), tail.begin(), tail.end());
    std::size_t next = 0;
    st = b.base(chain, next, "1");
    b.run(st, chain, next);
  } else {
    std::vector<AdmittanceOperator> blocks;
    std::vector<DiscretizedBoundary> outers;
    int depth = 0;
    Medium shared = scene.shells.empty() ? scene.background : scene.shells.front().medium;
    for (std::size_t g = 0; g < scene.groups.size(); ++g) {
      std::vector<ChainLayer> chain;
      const auto& layers = scene.groups[g].layers;
      for (std::size_t l = 0; l < layers.size(); ++l)
        chain.push_back({&mesh.groups[g][l], layers[l].medium, outer_medium(scene, int(g), int(l)), layers[l].pec});
      std::size_t next = 0;
      ChainState gs = b.base(chain, next, "1_" + std::to_string(g + 1));
      if (gs.bare_pec) throw ValidationError("bare pec object inside a multi-object scene");
      b.run(gs, chain, next);
      blocks.push_back(gs.Y);
      outers.push_back(gs.db);
      depth = std::max(depth, gs.depth);
    }
    st.Y = assemble_multi(blocks);
    st.db = concat(outers);
    st.depth = depth;
    st.hat_medium = shared;  // per-object hats lack the cross-object blocks; not reused
    b.run(st, tail, 0);
  }
  DsaoResult r;
  r.bare_pec = st.bare_pec;
  r.Ys = std::move(st.Y);
  r.Ys.boundary = st.bare_pec ? "gamma_1" : "gamma_" + std::to_string(st.depth);
  r.outer = std::move(st.db);
  r.records = b.records();
  for (const auto& rec : r.records) r.linalg_flops += rec.flops;
  r.assembly_entries = b.entries();
  return r;
}

}  // namespace tmscat
