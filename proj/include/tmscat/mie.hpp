#pragma once

#include <vector>

#include "tmscat/exterior.hpp"
#include "tmscat/geometry.hpp"

namespace tmscat {

// Concentric circular layers about the origin. media[i] fills
// radii[i-1] < rho < radii[i] (radii[-1] = 0). With pec_core, media[0] is
// ignored and rho < radii[0] is a perfect conductor.
struct RadialLayerStack {
  std::vector<double> radii;
  std::vector<Medium> media;
  bool pec_core = false;
  Medium background;
};

// Scene -> stack; throws ValidationError for anything that is not a single
// group of circles centred at the origin.
RadialLayerStack radial_stack(const Scene& s);

// Exterior coefficients b_0..b_N, E^s = E0 sum_n (-j)^n b_n H_n(k0 rho) e^{jn(phi - phi_inc)},
// b_{-n} = b_n. N grows until the tail is below 1e-12 relative.
CVector mie_coefficients(const RadialLayerStack& st, double freq, int extra_orders = 0);

RcsCurve mie_layered_tm(const RadialLayerStack& st, double freq, const std::vector<double>& angles,
                        double phi_inc = 0.0, int extra_orders = 0);

// Total field E and its radial derivative inside a single homogeneous
// cylinder (one-layer stack) at the point p, unit-amplitude incidence.
struct FieldSample {
  cplx E;
  cplx dE_drho;
  cplx dE_dphi;
};
FieldSample mie_single_interior_field(const RadialLayerStack& st, double freq, double phi_inc, const Point& p);

}  // namespace tmscat
