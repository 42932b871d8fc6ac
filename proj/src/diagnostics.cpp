#include "tmscat/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "tmscat/linalg.hpp"

namespace tmscat {

double condition_number(const CMatrix& A) {
  Eigen::BDCSVD<CMatrix> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  double smin = s[s.size() - 1];
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / smin;
}

void SolveLog::note(const std::string& label, const CMatrix& A) const {
  if (!record) return;
  ConditionEntry e;
  e.label = label;
  e.dim = int(A.rows());
  e.cond = conditions ? condition_number(A) : std::nan("");
  record->conditions.push_back(e);
}

namespace {

Eigen::PartialPivLU<CMatrix> factor(const CMatrix& A, const std::string& label) {
  if (!A.allFinite()) throw SingularMatrixError(label + " (non-finite entries)");
  Eigen::PartialPivLU<CMatrix> lu(A);
  double rc = lu.rcond();
  if (!(rc > 1e-14)) throw SingularMatrixError(label);
  return lu;
}

}  // namespace

CMatrix lu_solve(const CMatrix& A, const CMatrix& B, const std::string& label, const SolveLog& log) {
  log.note(label, A);
  auto lu = factor(A, label);
  log.add_flops(flops::lu(double(A.rows())) + flops::solve(double(A.rows()), double(B.cols())));
  return lu.solve(B);
}

CMatrix lu_solve_right(const CMatrix& A, const CMatrix& B, const std::string& label, const SolveLog& log) {
  log.note(label, A);
  auto lu = factor(A, label);
  log.add_flops(flops::lu(double(A.rows())) + flops::solve(double(A.rows()), double(B.rows())));
  CMatrix Bt = B.transpose();
  CMatrix Xt = lu.transpose().solve(Bt);
  return Xt.transpose();
}

CMatrix matmul(const CMatrix& A, const CMatrix& B, const SolveLog& log) {
  log.add_flops(flops::matmul(double(A.rows()), double(A.cols()), double(B.cols())));
  return A * B;
}

void write_report(std::ostream& os, const DiagnosticsReport& r) {
  char buf[256];
  os << "# condition numbers (2-norm)\n";
  os << "depth,label,dim,cond\n";
  auto row = [&](int depth, const ConditionEntry& e) {
    std::snprintf(buf, sizeof buf, "%d,%s,%d,%.6e\n", depth, e.label.c_str(), e.dim, e.cond);
    os << buf;
  };
  for (const auto& L : r.layers)
    for (const auto& e : L.conditions) row(L.depth, e);
  if (!r.final_system.label.empty()) row(-1, r.final_system);
  os << "# per-depth linear-algebra flops\n";
  for (const auto& L : r.layers) {
    std::snprintf(buf, sizeof buf, "depth %d: %.6e\n", L.depth, L.flops);
    os << buf;
  }
  os << "# summary\n";
  std::snprintf(buf, sizeof buf, "unknowns_dsao,%d\nunknowns_pmchwt,%d\n", r.unknowns_dsao, r.unknowns_pmchwt);
  os << buf;
  std::snprintf(buf, sizeof buf, "flops_dsao,%.6e\nflops_pmchwt,%.6e\n", r.flops_dsao, r.flops_pmchwt);
  os << buf;
  std::snprintf(buf, sizeof buf, "assembly_entries_dsao,%.6e\nassembly_entries_pmchwt,%.6e\n",
                r.assembly_entries_dsao, r.assembly_entries_pmchwt);
  os << buf;
  if (r.unknowns_pmchwt > 0) {
    std::snprintf(buf, sizeof buf, "unknown_ratio,%.6f\n", double(r.unknowns_dsao) / r.unknowns_pmchwt);
    os << buf;
  }
  if (r.flops_pmchwt > 0) {
    std::snprintf(buf, sizeof buf, "flop_ratio,%.6f\n", r.flops_dsao / r.flops_pmchwt);
    os << buf;
  }
  if (r.pmchwt_condition > 0) {
    std::snprintf(buf, sizeof buf, "pmchwt_condition,%.6e\npmchwt_condition_si,%.6e\n", r.pmchwt_condition,
                  r.pmchwt_condition_si);
    os << buf;
  }
}

}  // namespace tmscat
