#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include "tmscat/mie.hpp"
#include "tmscat/pmchwt.hpp"

using namespace tmscat;
namespace bm = boost::math;

namespace {

const double kUnitK = kSpeedOfLight / (2 * kPi);  // frequency with k0 = 1

cplx h2(int n, double x) { return {bm::cyl_bessel_j(n, x), -bm::cyl_neumann(n, x)}; }
cplx h2p(int n, double x) { return {bm::cyl_bessel_j_prime(n, x), -bm::cyl_neumann_prime(n, x)}; }

RadialLayerStack one_layer(double r, Medium m, bool pec = false) {
  RadialLayerStack st;
  st.radii = {r};
  st.media = {m};
  st.pec_core = pec;
  return st;
}

Scene circle_scene(double r, Medium m, bool pec = false) {
  Scene s;
  s.groups.push_back(Group{{Layer{Circle{{0, 0}, r}, m, pec}}});
  return s;
}

}  // namespace

TEST_CASE("conducting cylinder coefficients") {
  const CVector b = mie_coefficients(one_layer(1.0, Medium{}, true), kUnitK);
  CHECK(std::abs(b[0] + bm::cyl_bessel_j(0, 1.0) / h2(0, 1.0)) < 1e-10);
  CHECK(std::abs(b[2] + bm::cyl_bessel_j(2, 1.0) / h2(2, 1.0)) < 1e-10);
}

TEST_CASE("dielectric cylinder coefficients") {
  const double eps = 4.0, x0 = 1.0, x1 = 2.0;  // k1 a = sqrt(eps) k0 a
  const CVector b = mie_coefficients(one_layer(1.0, Medium{eps, 1, 0}), kUnitK);
  for (int n = 0; n < 4; ++n) {
    const double j1 = bm::cyl_bessel_j(n, x1), j1p = bm::cyl_bessel_j_prime(n, x1);
    const double j0 = bm::cyl_bessel_j(n, x0), j0p = bm::cyl_bessel_j_prime(n, x0);
    const cplx ref = -(x1 * j1p * j0 - x0 * j1 * j0p) / (x1 * j1p * h2(n, x0) - x0 * j1 * h2p(n, x0));
    CAPTURE(n);
    CHECK(std::abs(b[n] - ref) < 1e-10);
  }
}

TEST_CASE("background-filled stack scatters nothing") {
  RadialLayerStack st;
  st.radii = {0.5, 1.0};
  st.media = {Medium{}, Medium{}};
  CHECK(mie_coefficients(st, 3e8).norm() < 1e-14);
}

TEST_CASE("series truncation is converged") {
  RadialLayerStack st;
  st.radii = {0.010, 0.014};
  st.media = {Medium{1, 1, 5.6e7}, Medium{2.3, 1, 0}};
  const auto ang = uniform_angles(90);
  const auto a = mie_layered_tm(st, 30e9, ang);
  const auto b = mie_layered_tm(st, 30e9, ang, 0.0, 5);
  CHECK(relative_error(b, a) < 1e-20);
}

TEST_CASE("rotating the incidence rotates the pattern") {
  const auto st = one_layer(1.0, Medium{4, 1, 0});
  const auto ang = uniform_angles(360);
  const auto a = mie_layered_tm(st, 1.5e8, ang, 0.0);
  const auto b = mie_layered_tm(st, 1.5e8, ang, 40.0 * kPi / 180.0);
  for (int i = 0; i < 360; i += 11) CHECK(b.sigma[(i + 40) % 360] == doctest::Approx(a.sigma[i]).epsilon(1e-10));
}

TEST_CASE("radial stack extraction") {
  Scene s = circle_scene(1.0, Medium{4, 1, 0});
  CHECK(radial_stack(s).radii.size() == 1);
  s.groups[0].layers[0].boundary = Circle{{0.1, 0}, 1.0};
  CHECK_THROWS_AS(radial_stack(s), ValidationError);
  s.groups[0].layers[0].boundary = Polygon{{{0, 0}, {1, 0}, {0, 1}}};
  CHECK_THROWS_AS(radial_stack(s), ValidationError);
}

TEST_CASE("PMCHWT against the series") {
  const double f = 1.5e8;
  const Scene s = circle_scene(1.0, Medium{4, 1, 0});
  const auto mesh = build_scene_mesh(s, f, 15);
  const auto ang = uniform_angles(90);
  const auto p = pmchwt_solve(s, f, mesh, {0.0, 1.0, f}, ang);
  CHECK(relative_error(p.curve, mie_layered_tm(radial_stack(s), f, ang)) < 1e-2);
  CHECK(p.unknowns == 2 * mesh.total_segments());
  CHECK(pmchwt_unknowns(s, mesh) == p.unknowns);
  CHECK(p.condition > 1.0);
}

TEST_CASE("PMCHWT on a coated conductor") {
  const double f = 30e9;
  Scene s;
  s.groups.push_back(Group{{Layer{Circle{{0, 0}, 0.010}, Medium{}, true},
                            Layer{Circle{{0, 0}, 0.014}, Medium{2.3, 1, 0}, false}}});
  const auto mesh = build_scene_mesh(s, f, 15);
  CHECK(pmchwt_unknowns(s, mesh) == mesh.groups[0][0].size() + 2 * mesh.groups[0][1].size());
  const auto ang = uniform_angles(90);
  const auto p = pmchwt_solve(s, f, mesh, {0.0, 1.0, f}, ang, {false, {}});
  CHECK(p.condition == 0.0);
  CHECK(relative_error(p.curve, mie_layered_tm(radial_stack(s), f, ang)) < 1e-2);
}

TEST_CASE("cost model") {
  CHECK(pmchwt_flops(100) == doctest::Approx(8.0 / 3.0 * 1e6 + 8.0 * 1e4));
  CHECK(pmchwt_flops(2000) / pmchwt_flops(1000) == doctest::Approx(8.0).epsilon(2e-3));
}
