#include <doctest.h>

#include "tmscat/exterior.hpp"

using namespace tmscat;

namespace {

struct Solved {
  DsaoResult d;
  SolutionFields fields;
  Kernel k0;
};

Solved solve(const Scene& s, double f, int ppw, const Excitation& exc) {
  const auto mesh = build_scene_mesh(s, f, ppw);
  Solved r{build_dsao(s, f, mesh, {false, {}}), {}, make_kernel(s.background, f)};
  const CMatrix G = assemble_self(r.d.outer, r.k0).G();
  r.fields = solve_exterior(r.d.Ys, G, r.d.outer.lengths, incident_vector(r.d.outer, r.k0.k, exc), "final");
  return r;
}

Scene triangle() {
  Scene s;
  s.groups.push_back(Group{{Layer{Polygon{{{0, 0.3}, {-0.3, -0.2}, {0.3, -0.2}}}, Medium{3, 1, 0}, false}}});
  return s;
}

}  // namespace

TEST_CASE("incident vector") {
  const auto db = discretize(Circle{{0.2, 0.1}, 0.5}, 0.05);
  const Excitation exc{0.4, cplx(2.0, -1.0), 3e8};

  // static limit: plain segment lengths
  const CVector stat = incident_vector(db, 1e-12, exc);
  CHECK((stat - exc.E0 * db.lengths.cast<cplx>()).norm() < 1e-10);

  // closed form against 16-point Gauss on every segment
  const cplx k = 2 * kPi;
  const CVector v = incident_vector(db, k, exc);
  const Point dir(std::cos(exc.phi_inc), std::sin(exc.phi_inc));
  const double xg[] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                       0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
  const double wg[] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                       0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  for (int i = 0; i < db.size(); ++i) {
    cplx acc = 0.0;
    for (int q = 0; q < 8; ++q) {
      const Point r = db.midpoints.col(i) + 0.5 * xg[q] * (db.end(i) - db.start(i));
      acc += 0.5 * wg[q] * exc.E0 * std::exp(-kJ * k * dir.dot(r));
    }
    CHECK(std::abs(v[i] - acc * db.lengths[i]) < 1e-12);
  }

  // translation by s multiplies by exp(-j k dir.s)
  const Point shift(0.7, -0.4);
  const CVector moved = incident_vector(transformed(db, 0.0, shift), k, exc);
  CHECK((moved - v * std::exp(-kJ * k * dir.dot(shift))).norm() < 1e-12 * v.norm());
}

TEST_CASE("zero admittance leaves L E = E_inc") {
  const auto db = discretize(Circle{{0, 0}, 0.5}, 0.05);
  const Kernel k0 = make_kernel(Medium{}, 3e8);
  AdmittanceOperator Y;
  Y.Ys = CMatrix::Zero(db.size(), db.size());
  Y.blocks = {db.size()};
  const CVector Einc = incident_vector(db, k0.k, {0.0, 1.0, 3e8});
  const auto sol = solve_exterior(Y, assemble_self(db, k0).G(), db.lengths, Einc, "L");
  CHECK((db.lengths.cast<cplx>().asDiagonal() * sol.E - Einc).norm() < 1e-13 * Einc.norm());
  CHECK(sol.J.norm() == 0.0);
}

TEST_CASE("short segment radiates isotropically") {
  Eigen::Matrix2Xd nodes(2, 3);
  nodes << 0.0, 1e-4, 0.0, 0.0, 0.0, 1e-4;
  const auto db = from_nodes(nodes);
  CVector J = CVector::Zero(db.size());
  J[0] = 1.0;
  const cplx k = 2 * kPi;
  const double ref = std::abs(far_field(J, db, k, 1.0, 0.0));
  for (double phi = 0.1; phi < 2 * kPi; phi += 0.37)
    CHECK(std::abs(far_field(J, db, k, 1.0, phi)) == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("mirror symmetry") {
  const Excitation exc{kPi / 2, 1.0, 3e8};
  const auto s = solve(triangle(), 3e8, 30, exc);
  const auto c = rcs(s.fields.J, s.d.outer, s.k0.k, s.k0.omega_mu(), uniform_angles(360));
  // symmetric about the y axis: phi <-> pi - phi
  for (int i = 0; i < 360; i += 7) {
    const int m = (540 - i) % 360;
    CHECK(std::abs(c.sigma[i] - c.sigma[m]) <= 1e-10 * c.sigma[i]);
  }
}

TEST_CASE("linearity in the amplitude") {
  const auto a = solve(triangle(), 3e8, 20, {0.3, 1.0, 3e8});
  const auto b = solve(triangle(), 3e8, 20, {0.3, cplx(0.0, 3.0), 3e8});
  CHECK((b.fields.J - cplx(0.0, 3.0) * a.fields.J).norm() < 1e-12 * b.fields.J.norm());
  const auto angles = uniform_angles(36);
  const auto ca = rcs(a.fields.J, a.d.outer, a.k0.k, a.k0.omega_mu(), angles);
  const auto cb = rcs(b.fields.J, b.d.outer, b.k0.k, b.k0.omega_mu(), angles, cplx(0.0, 3.0));
  CHECK(relative_error(cb, ca) < 1e-20);
}

TEST_CASE("optical theorem for a lossless object") {
  const double phi_i = 0.6;
  const auto s = solve(triangle(), 3e8, 30, {phi_i, 1.0, 3e8});
  const int n = 720;
  const auto c = rcs(s.fields.J, s.d.outer, s.k0.k, s.k0.omega_mu(), uniform_angles(n));
  double mean = 0.0;
  for (double v : c.sigma) mean += v / n;
  const cplx fwd = far_field(s.fields.J, s.d.outer, s.k0.k, s.k0.omega_mu(), phi_i);
  const double extinction = -4.0 / s.k0.k.real() * fwd.real();
  CHECK(std::abs(mean - extinction) < 1e-2 * extinction);
}

TEST_CASE("relative error") {
  RcsCurve a{{0.0, 1.0, 2.0}, {1.0, 2.0, 3.0}};
  CHECK(relative_error(a, a) == 0.0);
  RcsCurve b = a;
  for (auto& v : b.sigma) v *= 2.0;
  CHECK(relative_error(b, a) == doctest::Approx(1.0));
  const auto ang = uniform_angles(4);
  REQUIRE(ang.size() == 4);
  CHECK(ang[1] == doctest::Approx(kPi / 2));
  CHECK(to_db(10.0) == doctest::Approx(10.0));
}
