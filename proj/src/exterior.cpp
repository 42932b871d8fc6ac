#include "tmscat/exterior.hpp"

#include <cmath>
#include <stdexcept>

namespace tmscat {

namespace {

// sin(z)/z, series near 0
cplx sinc(cplx z) {
  if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0;
  return std::sin(z) / z;
}

// int_segment exp(j beta . r') dr' for direction vector beta (complex scale).
cplx segment_phase_integral(const DiscretizedBoundary& db, int m, cplx kk, const Point& dir) {
  const Point t = db.tangent(m);
  const double l = db.lengths[m];
  const cplx phase = std::exp(kJ * kk * dir.dot(db.midpoints.col(m)));
  return phase * l * sinc(0.5 * kk * dir.dot(t) * l);
}

}  // namespace

std::vector<double> uniform_angles(int n) {
  std::vector<double> a(n);
  for (int i = 0; i < n; ++i) a[i] = 2.0 * kPi * i / n;
  return a;
}

CVector incident_vector(const DiscretizedBoundary& db, cplx k0, const Excitation& exc) {
  const Point dir(std::cos(exc.phi_inc), std::sin(exc.phi_inc));
  CVector v(db.size());
  for (int m = 0; m < db.size(); ++m) v[m] = exc.E0 * segment_phase_integral(db, m, -k0, dir);
  return v;
}

SolutionFields solve_exterior(const AdmittanceOperator& Ys, const CMatrix& G_ext, const Eigen::VectorXd& L,
                              const CVector& E_inc, const std::string& label, const SolveLog& log) {
  CMatrix A = -mul_admittance(G_ext, Ys, log);
  A.diagonal() += L.cast<cplx>();
  SolutionFields s;
  s.final_system.label = label;
  s.final_system.dim = int(A.rows());
  s.final_system.cond = log.conditions ? condition_number(A) : std::nan("");
  SolveLog quiet{nullptr, false};
  s.E = lu_solve(A, E_inc, label, quiet);
  log.add_flops(flops::lu(double(A.rows())) + flops::solve(double(A.rows()), 1));
  s.J = Ys.Ys * s.E;
  log.add_flops(flops::matmul(double(A.rows()), double(A.rows()), 1));
  return s;
}

SolutionFields solve_pec_efie(const CMatrix& G_ext, const CVector& E_inc, const SolveLog& log) {
  SolutionFields s;
  s.final_system.label = "G_1^(1)";
  s.final_system.dim = int(G_ext.rows());
  s.final_system.cond = log.conditions ? condition_number(G_ext) : std::nan("");
  SolveLog quiet{nullptr, false};
  s.J = -lu_solve(G_ext, E_inc, s.final_system.label, quiet);
  log.add_flops(flops::lu(double(G_ext.rows())) + flops::solve(double(G_ext.rows()), 1));
  s.E = CVector::Zero(G_ext.rows());
  return s;
}

cplx far_field(const CVector& J, const DiscretizedBoundary& db, cplx k0, double omega_mu0, double phi) {
  const Point dir(std::cos(phi), std::sin(phi));
  cplx acc = 0.0;
  for (int m = 0; m < db.size(); ++m) acc += J[m] * segment_phase_integral(db, m, k0, dir);
  return -0.25 * omega_mu0 * acc;
}

RcsCurve rcs(const CVector& J, const DiscretizedBoundary& db, cplx k0, double omega_mu0,
             const std::vector<double>& angles, cplx E0) {
  RcsCurve c;
  c.phi = angles;
  c.sigma.resize(angles.size());
  const double k = k0.real();
  for (std::size_t i = 0; i < angles.size(); ++i) {
    cplx F = far_field(J, db, k0, omega_mu0, angles[i]);
    c.sigma[i] = 4.0 * std::norm(F) / (k * std::norm(E0));
  }
  return c;
}

double relative_error(const RcsCurve& calc, const RcsCurve& ref) {
  if (calc.size() != ref.size()) throw std::invalid_argument("relative_error: angle grids differ");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    if (std::abs(calc.phi[i] - ref.phi[i]) > 1e-12) throw std::invalid_argument("relative_error: angle grids differ");
    num += (calc.sigma[i] - ref.sigma[i]) * (calc.sigma[i] - ref.sigma[i]);
    den += ref.sigma[i] * ref.sigma[i];
  }
  return num / den;
}

}  // namespace tmscat
