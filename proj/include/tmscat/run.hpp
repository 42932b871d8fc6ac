#pragma once

#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "tmscat/diagnostics.hpp"
#include "tmscat/exterior.hpp"
#include "tmscat/geometry.hpp"
#include "tmscat/operators.hpp"

namespace tmscat {

enum class Formulation { Dsao, Pmchwt, Mie };

Formulation parse_formulation(const std::string& name);

struct RunConfig {
  Scene scene;
  double freq = 0.0;
  int ppw = 20;
  std::optional<double> mesh_h;  // uniform segment length, overrides ppw
  Formulation formulation = Formulation::Dsao;
  int n_angles = 360;
  double phi_inc = 0.0;
  bool conditions = true;     // SVD of every inverted matrix
  bool pmchwt_estimate = true;  // PMCHWT unknowns/flops from mesh sizes only
  QuadratureOptions quadrature;
};

struct RunResult {
  RcsCurve curve;
  DiagnosticsReport report;
  SceneMesh mesh;
  SolutionFields fields;  // DSAO only
};

// validate -> mesh -> solve -> far field.
RunResult run(const RunConfig& cfg);

// CLI exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitValidation = 3,
  kExitSingular = 4,
  kExitIo = 5,
  kExitNumerical = 6,
};

// Maps a caught exception to an exit code and a one-line message.
int exit_code_for(std::exception_ptr e, std::string& message);

}  // namespace tmscat
