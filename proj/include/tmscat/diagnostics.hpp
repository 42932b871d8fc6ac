#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tmscat {

// Analytic flop model, complex multiply-add = 8 real flops.
namespace flops {
inline double lu(double n) { return 8.0 / 3.0 * n * n * n; }
inline double solve(double n, double k) { return 8.0 * n * n * k; }
inline double matmul(double n, double m, double p) { return 8.0 * n * m * p; }
}  // namespace flops

struct ConditionEntry {
  std::string label;
  int dim = 0;
  double cond = 0.0;  // 2-norm; NaN when not computed
};

// Everything inverted at one recursion depth.
struct LayerSolveRecord {
  int depth = 0;
  std::vector<ConditionEntry> conditions;
  double flops = 0.0;
};

struct DiagnosticsReport {
  std::vector<LayerSolveRecord> layers;  // ordered by depth
  ConditionEntry final_system;
  int unknowns_dsao = 0;
  int unknowns_pmchwt = 0;
  double flops_dsao = 0.0;       // linear algebra, whole recursion + final solve
  double flops_pmchwt = 0.0;     // LU + solve of the 2N system
  double assembly_entries_dsao = 0.0;    // kernel-matrix entries filled
  double assembly_entries_pmchwt = 0.0;
  double pmchwt_condition = 0.0;     // impedance-balanced; 0 when not computed
  double pmchwt_condition_si = 0.0;  // SI unknowns
};

// Plain-text report: one row per inverted matrix, then unknowns and flops.
void write_report(std::ostream& os, const DiagnosticsReport& r);

}  // namespace tmscat
