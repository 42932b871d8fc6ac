#include <doctest.h>

#include "tmscat/dsao.hpp"
#include "tmscat/mie.hpp"
#include "tmscat/run.hpp"

using namespace tmscat;

namespace {

Scene single(double r, Medium m) {
  Scene s;
  s.groups.push_back(Group{{Layer{Circle{{0, 0}, r}, m, false}}});
  return s;
}

RcsCurve dsao_rcs(const Scene& s, double freq, int ppw, int n_angles = 72) {
  RunConfig c;
  c.scene = s;
  c.freq = freq;
  c.ppw = ppw;
  c.n_angles = n_angles;
  c.conditions = false;
  return run(c).curve;
}

}  // namespace

TEST_CASE("null scatterer has zero Ys") {
  const double f = 3e8;
  const Scene s = single(0.5, Medium{});
  const auto mesh = build_scene_mesh(s, f, 20);
  const auto d = build_dsao(s, f, mesh, {false, {}});
  const auto& db = mesh.groups[0][0];
  const CMatrix Y = sao_single(assemble_self(db, make_kernel(Medium{}, f)));
  CHECK(d.Ys.Ys.norm() <= 1e-10 * Y.norm());

  // a transparent layer on top of a real object changes nothing either
  Scene two = single(0.3, Medium{4, 1, 0});
  two.groups[0].layers.push_back(Layer{Circle{{0, 0}, 0.5}, Medium{}, false});
  const auto one = dsao_rcs(single(0.3, Medium{4, 1, 0}), f, 30);
  CHECK(relative_error(dsao_rcs(two, f, 30), one) < 1e-3);
}

TEST_CASE("Ys is antisymmetric under swapping the two media") {
  const double f = 3e8;
  const auto db = discretize(Circle{{0, 0}, 0.5}, 0.02);
  const CMatrix Ya = sao_single(assemble_self(db, make_kernel(Medium{4, 1, 0}, f)));
  const CMatrix Yb = sao_single(assemble_self(db, make_kernel(Medium{2, 1, 0.01}, f)));
  const auto ab = dsao_single(Ya, Yb);
  const auto ba = dsao_single(Yb, Ya);
  CHECK((ab.Ys + ba.Ys).norm() < 1e-14 * ab.Ys.norm());
  CHECK(ab.blocks == std::vector<int>{db.size()});
}

TEST_CASE("splitting a homogeneous object into layers") {
  const double f = 3e8;
  const Medium m{3, 1, 0};
  Scene split = single(0.25, m);
  split.groups[0].layers.push_back(Layer{Circle{{0, 0}, 0.5}, m, false});
  const auto ref = dsao_rcs(single(0.5, m), f, 25);
  CHECK(relative_error(dsao_rcs(split, f, 25), ref) < 1e-3);
}

TEST_CASE("single-boundary SAO maps interior E to the equivalent current") {
  const double f = 1.5e8;
  const Medium m{4, 1, 0};
  const Scene s = single(1.0, m);
  const auto st = radial_stack(s);
  const auto db = discretize(Circle{{0, 0}, 1.0}, 0.02);
  const Kernel kern = make_kernel(m, f);
  const CMatrix Y = sao_single(assemble_self(db, kern));

  CVector E(db.size()), J(db.size());
  for (int i = 0; i < db.size(); ++i) {
    const auto fs = mie_single_interior_field(st, f, 0.0, db.midpoints.col(i));
    E[i] = fs.E;
    J[i] = fs.dE_drho / (kJ * kern.omega_mu());  // J = n x H
  }
  // midpoint samples stand in for the pulse coefficients
  CHECK((Y * E - J).norm() < 1e-2 * J.norm());
}

TEST_CASE("coating made of background reproduces the bare conductor") {
  const double f = 30e9;
  Scene s;
  s.groups.push_back(Group{{Layer{Circle{{0, 0}, 0.010}, Medium{}, true},
                            Layer{Circle{{0, 0}, 0.014}, Medium{}, false}}});
  RadialLayerStack pec;
  pec.radii = {0.010};
  pec.media = {Medium{}};
  pec.pec_core = true;
  const auto angles = uniform_angles(72);
  const auto ref = mie_layered_tm(pec, f, angles);
  CHECK(relative_error(dsao_rcs(s, f, 20), ref) < 1e-2);
}

TEST_CASE("fictitious extension") {
  const double f = 3e8;
  // transparent object: still nothing after the extension
  Scene t = single(0.5, Medium{});
  t.extension = 0.2;
  const auto mt = build_scene_mesh(t, f, 20);
  const auto dt = build_dsao(t, f, mt, {false, {}});
  CHECK(dt.Ys.Ys.norm() < 1e-9);
  CHECK(dt.outer.size() == mt.fictitious->size());

  // real object: same echo width with and without the extension
  Scene s = single(0.5, Medium{4, 1, 0});
  const auto base = dsao_rcs(s, f, 25);
  s.extension = 0.2;
  CHECK(relative_error(dsao_rcs(s, f, 25), base) < 1e-3);
}

TEST_CASE("records and determinism") {
  const double f = 30e9;
  Scene s;
  s.groups.push_back(Group{{Layer{Circle{{0, 0}, 0.010}, Medium{1, 1, 5.6e7}, false},
                            Layer{Circle{{0, 0}, 0.014}, Medium{2.3, 1, 0}, false}}});
  const auto mesh = build_scene_mesh_uniform(s, 0.001);
  const auto a = build_dsao(s, f, mesh);
  const auto b = build_dsao(s, f, mesh);
  CHECK((a.Ys.Ys - b.Ys.Ys).norm() == 0.0);
  REQUIRE(a.records.size() == 2);
  CHECK(a.records[0].depth == 1);
  CHECK(a.records[0].conditions.front().label == "P_1^(1)");
  CHECK(a.records[1].conditions.front().label == "V_1^(2)");
  for (const auto& rec : a.records) {
    CHECK(rec.flops > 0.0);
    for (const auto& c : rec.conditions) CHECK(c.cond >= 1.0);
  }
}
