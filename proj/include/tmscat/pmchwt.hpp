#pragma once

#include <vector>

#include "tmscat/exterior.hpp"
#include "tmscat/geometry.hpp"
#include "tmscat/operators.hpp"

namespace tmscat {

// Dual-source reference: E (magnetic current) and H (electric current)
// pulses on every interface, H only on a PEC interface. Each region's field
// representation is tested on each of its boundaries. H unknowns are scaled
// by the background impedance so both unknown kinds are in volts per meter.
struct PmchwtResult {
  RcsCurve curve;
  int unknowns = 0;
  double condition = 0.0;     // impedance-balanced system; 0 when not computed
  double condition_si = 0.0;  // same system in SI unknowns
  CVector E_outer, H_outer;
};

struct PmchwtOptions {
  bool conditions = true;
  QuadratureOptions quadrature;
};

int pmchwt_unknowns(const Scene& s, const SceneMesh& mesh);
double pmchwt_flops(int unknowns);
// Kernel-matrix entries: every region couples all of its boundaries.
double pmchwt_assembly_entries(const Scene& s, const SceneMesh& mesh);

PmchwtResult pmchwt_solve(const Scene& s, double freq, const SceneMesh& mesh, const Excitation& exc,
                          const std::vector<double>& angles, const PmchwtOptions& opt = {});

}  // namespace tmscat
