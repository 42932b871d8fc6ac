#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tmscat {

using cplx = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrix = Matrix<cplx>;
using CVector = Vector<cplx>;
using RVector = Vector<double>;
using Point = Eigen::Vector2d;

inline constexpr cplx kJ{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kMu0 = 4.0e-7 * kPi;
inline constexpr double kEps0 = 1.0 / (kMu0 * kSpeedOfLight * kSpeedOfLight);

// Error hierarchy. Each leaf maps to one CLI exit code (see run.hpp).

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

struct GeometryError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// LU factorization hit a (numerically) singular matrix. `label` names the
/// matrix the way the diagnostics report does.
struct SingularMatrixError : std::runtime_error {
  explicit SingularMatrixError(std::string label)
      : std::runtime_error("singular matrix: " + label), label(std::move(label)) {}
  std::string label;
};

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

}  // namespace tmscat
