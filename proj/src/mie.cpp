#include "tmscat/mie.hpp"

#include <algorithm>
#include <cmath>

#include "tmscat/special_functions.hpp"

namespace tmscat {

RadialLayerStack radial_stack(const Scene& s) {
  if (s.groups.size() != 1) throw ValidationError("mie: needs a single concentric object");
  RadialLayerStack st;
  st.background = s.background;
  std::vector<Layer> layers = s.groups[0].layers;
  layers.insert(layers.end(), s.shells.begin(), s.shells.end());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto* c = std::get_if<Circle>(&layers[i].boundary);
    if (!c) throw ValidationError("mie: every boundary must be a circle");
    if (c->center.norm() > 1e-12 * c->radius) throw ValidationError("mie: circles must be centred at the origin");
    if (!st.radii.empty() && !(c->radius > st.radii.back()))
      throw ValidationError("mie: radii must increase outward");
    st.radii.push_back(c->radius);
    st.media.push_back(layers[i].medium);
  }
  st.pec_core = layers.front().pec;
  return st;
}

namespace {

// C'_n = C_{n-1} - (n/z) C_n, C'_0 = -C_1 (same scaling as C).
cplx deriv(const CVector& c, int n, cplx z) { return n == 0 ? -c[1] : c[n - 1] - (double(n) / z) * c[n]; }

struct Radial {
  CVector js, hs;  // orders 0..N+1, scaled
};

Radial radial(int N, cplx z) { return {bessel_j_sequence_scaled(N + 1, z), hankel2_sequence_scaled(N + 1, z)}; }

CVector coefficients(const RadialLayerStack& st, double freq, int N) {
  const int nl = int(st.radii.size());
  const cplx k0 = wavenumber(st.background, freq);
  const double kap0 = k0.real() / st.background.mu_r;
  // per-interface radial functions
  std::vector<Radial> at_inner(nl), at_outer(nl);  // layer i at radii[i-1], radii[i]
  for (int i = 0; i < nl; ++i) {
    const cplx k = wavenumber(st.media[i], freq);
    if (!(i == 0 && st.pec_core)) at_outer[i] = radial(N, k * st.radii[i]);
    if (i > 0) at_inner[i] = radial(N, k * st.radii[i - 1]);
  }
  const double a = st.radii.back();
  const cplx z0 = k0 * a;
  const Radial ext = radial(N, z0);
  const double sc0 = std::exp(std::abs(z0.imag()));
  const cplx eh0 = std::exp(-kJ * z0);

  CVector b(N + 1);
  for (int n = 0; n <= N; ++n) {
    cplx e, h;
    int first;
    if (st.pec_core) {
      e = 0.0;
      h = 1.0;
      first = 1;
    } else {
      const cplx k = wavenumber(st.media[0], freq), z = k * st.radii[0];
      const double kap = 1.0 / st.media[0].mu_r;
      e = at_outer[0].js[n];
      h = kap * k * deriv(at_outer[0].js, n, z);
      first = 1;
    }
    for (int i = first; i < nl; ++i) {
      const cplx k = wavenumber(st.media[i], freq);
      const cplx kap = k / st.media[i].mu_r;
      const double r0 = st.radii[i - 1], r1 = st.radii[i];
      const cplx z0i = k * r0, z1i = k * r1;
      const Radial& in = at_inner[i];
      const Radial& out = at_outer[i];
      const cplx J0 = in.js[n], J0d = kap * deriv(in.js, n, z0i);
      const cplx H0 = in.hs[n], H0d = kap * deriv(in.hs, n, z0i);
      const cplx det = J0 * H0d - H0 * J0d;
      const cplx A = (e * H0d - H0 * h) / det;
      const cplx B = (J0 * h - e * J0d) / det;
      // carry to r1: J grows by e^{|Im k| d}, H decays by e^{-|Im k| d}; the
      // common growth factor is dropped.
      const double d = r1 - r0;
      const cplx hf = std::exp(cplx(-2.0 * std::abs(k.imag()) * d, -k.real() * d));
      const cplx J1 = out.js[n], J1d = kap * deriv(out.js, n, z1i);
      const cplx H1 = out.hs[n], H1d = kap * deriv(out.hs, n, z1i);
      e = A * J1 + B * hf * H1;
      h = A * J1d + B * hf * H1d;
      const double nrm = std::max(std::abs(e), std::abs(h));
      e /= nrm;
      h /= nrm;
    }
    const cplx J = ext.js[n] * sc0, Jd = kap0 * deriv(ext.js, n, z0) * sc0;
    const cplx H = ext.hs[n] * eh0, Hd = kap0 * deriv(ext.hs, n, z0) * eh0;
    b[n] = (e * Jd - h * J) / (h * H - e * Hd);
  }
  return b;
}

}  // namespace

CVector mie_coefficients(const RadialLayerStack& st, double freq, int extra_orders) {
  if (st.radii.empty() || st.radii.size() != st.media.size()) throw ValidationError("mie: malformed layer stack");
  if (st.background.sigma != 0.0) throw ValidationError("mie: background must be lossless");
  const cplx k0 = wavenumber(st.background, freq);
  const double a = st.radii.back();
  int N = int(std::ceil(std::abs(k0) * a)) + 15;
  const int nmax = max_order(k0 * a);
  for (;;) {
    CVector b = coefficients(st, freq, N + extra_orders);
    double total = b.cwiseAbs().sum();
    double tail = std::abs(b[N]) + std::abs(b[N - 1]);
    if (total == 0.0 || tail < 1e-12 * total) return b;
    N += 10;
    if (N > nmax) throw ConvergenceError("mie: series did not converge");
  }
}

RcsCurve mie_layered_tm(const RadialLayerStack& st, double freq, const std::vector<double>& angles,
                        double phi_inc, int extra_orders) {
  CVector b = mie_coefficients(st, freq, extra_orders);
  const double k0 = wavenumber(st.background, freq).real();
  RcsCurve c;
  c.phi = angles;
  c.sigma.resize(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i) {
    cplx s = b[0];
    for (int n = 1; n < b.size(); ++n) s += 2.0 * b[n] * std::cos(n * (angles[i] - phi_inc));
    c.sigma[i] = 4.0 / k0 * std::norm(s);
  }
  return c;
}

FieldSample mie_single_interior_field(const RadialLayerStack& st, double freq, double phi_inc, const Point& p) {
  if (st.radii.size() != 1 || st.pec_core) throw ValidationError("mie: single dielectric cylinder expected");
  CVector b = mie_coefficients(st, freq);
  const int N = int(b.size()) - 1;
  const cplx k0 = wavenumber(st.background, freq), k1 = wavenumber(st.media[0], freq);
  const double a = st.radii[0];
  const cplx za = k0 * a, z1a = k1 * a;
  // interior amplitude c_n from continuity of E at rho = a
  CVector ja = bessel_j_sequence_scaled(N + 1, za), ha = hankel2_sequence_scaled(N + 1, za);
  CVector j1a = bessel_j_sequence_scaled(N + 1, z1a);
  const double rho = p.norm(), phi = std::atan2(p.y(), p.x());
  const cplx zr = k1 * rho;
  CVector jr = bessel_j_sequence_scaled(N + 1, zr);
  FieldSample f{0.0, 0.0, 0.0};
  for (int n = 0; n <= N; ++n) {
    const cplx outer = ja[n] * std::exp(std::abs(za.imag())) + b[n] * ha[n] * std::exp(-kJ * za);
    // J_n(k1 rho)/J_n(k1 a) in scaled form
    const double g = std::exp(std::abs(zr.imag()) - std::abs(z1a.imag()));
    const cplx ratio = jr[n] / j1a[n] * g;
    const cplx dratio = k1 * deriv(jr, n, zr) / j1a[n] * g;
    const cplx pw = std::pow(-kJ, n);
    const double w = n == 0 ? 1.0 : 2.0;
    const double cs = std::cos(n * (phi - phi_inc)), sn = std::sin(n * (phi - phi_inc));
    f.E += w * pw * outer * ratio * cs;
    f.dE_drho += w * pw * outer * dratio * cs;
    f.dE_dphi += -w * pw * outer * ratio * double(n) * sn;
  }
  return f;
}

}  // namespace tmscat
