#include "tmscat/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tmscat/quadrature.hpp"

namespace tmscat {

namespace {

constexpr double kSeriesRadius = 2.0;
constexpr double kAsymptoticRadius = 20.0;
constexpr double kMaxExponent = 700.0;

// Scaled orders 0 and 1: J_s and H2_s.
struct Pair01 {
  cplx j0, j1, h0, h1;
};

// J_n(z) by the ascending series (small |z| only).
cplx series_j(int n, cplx z) {
  const cplx q = 0.25 * z * z;
  cplx lead = 1.0;
  for (int k = 1; k <= n; ++k) lead *= 0.5 * z / double(k);
  cplx term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (double(k) * double(n + k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return lead * sum;
}

// Y0, Y1 from the logarithmic series (small |z| only).
std::pair<cplx, cplx> series_y01(cplx z, cplx j0, cplx j1) {
  const cplx q = 0.25 * z * z;
  const cplx lg = std::log(0.5 * z);
  cplx s0 = 0.0, s1 = 0.0;
  cplx t0 = 1.0, t1 = 1.0;  // (-q)^k/(k!)^2 and (-q)^k/(k!(k+1)!)
  double hk = 0.0;
  s1 = -2.0 * kEulerGamma + 1.0;  // k = 0 term of the Y1 sum (H_0 + H_1)
  for (int k = 1; k < 200; ++k) {
    t0 *= -q / (double(k) * k);
    t1 *= -q / (double(k) * (k + 1));
    double hk1 = hk + 1.0 / k;
    cplx a = -hk1 * t0;
    cplx b = (-2.0 * kEulerGamma + hk1 + hk1 + 1.0 / (k + 1)) * t1;
    hk = hk1;
    s0 += a;
    s1 += b;
    if (std::abs(a) < 1e-17 * std::abs(s0) && std::abs(b) < 1e-17 * std::abs(s1)) break;
  }
  cplx y0 = (2.0 / kPi) * ((lg + kEulerGamma) * j0 + s0);
  cplx y1 = -2.0 / (kPi * z) + (2.0 / kPi) * lg * j1 - (0.5 * z / kPi) * s1;
  return {y0, y1};
}

// Phase that maps Miller's normalized ratios to the scaled J_s.
// For Im z <= 0 the normalizer is e^{jz}; otherwise e^{-jz}.
int miller_start(int nmax, double az) {
  return std::max(nmax, int(std::ceil(az))) + 20 + int(std::ceil(20.0 * std::cbrt(0.5 * az)));
}

// Scaled J_0..J_N by downward recurrence; returns the whole run so callers
// can form Neumann sums.
std::vector<cplx> miller_scaled(int nmax, cplx z) {
  const double az = std::abs(z);
  const int N = miller_start(nmax, az);
  const bool lower = z.imag() <= 0.0;
  const cplx unit = lower ? kJ : -kJ;
  std::vector<cplx> f(N + 1);
  cplx fp1 = 0.0, fk = 1e-30;
  f[N] = fk;
  for (int k = N; k >= 1; --k) {
    cplx fm1 = (2.0 * k / z) * fk - fp1;
    fp1 = fk;
    fk = fm1;
    f[k - 1] = fk;
    if (std::abs(fk) > 1e250) {
      for (int i = k - 1; i <= N; ++i) f[i] *= 1e-250;
      fp1 *= 1e-250;
      fk *= 1e-250;
    }
  }
  // normalizer sum, accumulated from the top so small terms go first
  cplx s = 0.0;
  std::vector<cplx> pw(N + 1);
  pw[0] = 1.0;
  for (int k = 1; k <= N; ++k) pw[k] = pw[k - 1] * unit;
  for (int k = N; k >= 1; --k) s += 2.0 * pw[k] * f[k];
  s += f[0];
  const cplx phase = std::exp((lower ? 1.0 : -1.0) * kJ * z.real());
  const cplx scale = phase / s;
  for (auto& v : f) v *= scale;
  return f;
}

// Hankel asymptotic sum sum_k (s j)^k a_k(n) / z^k with s = +1 (H1) or -1 (H2).
cplx hankel_asym_sum(int n, cplx z, double s) {
  const double mu = 4.0 * n * n;
  const cplx step = (s * kJ) / (8.0 * z);
  cplx term = 1.0, sum = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= step * ((mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / k);
    double a = std::abs(term);
    if (a > prev) break;  // divergent tail
    sum += term;
    prev = a;
    if (a < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// H2_s orders 0, 1 from the Laplace-type integral
//   H2_nu(z) = sqrt(2/(pi z)) e^{-j(z - nu pi/2 - pi/4)} / Gamma(nu+1/2)
//              * int_0^inf e^{-u} u^{nu-1/2} (1 - j u/(2z))^{nu-1/2} du,
// substituted u = t^2. Free of the J - jY cancellation when Im z << 0.
std::pair<cplx, cplx> hankel_integral01(cplx z) {
  const GaussRule& g = gauss_legendre(16);
  const cplx alpha = -kJ / (2.0 * z);
  const double width = 0.5, tmax = 6.5;
  cplx i0 = 0.0, i1 = 0.0;
  for (double a = 0.0; a < tmax; a += width) {
    const double c = a + 0.5 * width, h = 0.5 * width;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      double t = c + h * g.x[i];
      double t2 = t * t;
      double e = 2.0 * std::exp(-t2) * g.w[i] * h;
      cplx r = std::sqrt(1.0 + alpha * t2);
      i0 += e / r;
      i1 += e * t2 * r;
    }
  }
  const cplx pre = std::sqrt(2.0 / (kPi * z));
  const double sp = std::sqrt(kPi);
  cplx h0 = pre * std::exp(kJ * (kPi / 4)) * i0 / sp;
  cplx h1 = pre * std::exp(kJ * (3 * kPi / 4)) * i1 / (0.5 * sp);
  return {h0, h1};
}

// e^{-|Im z|} * e^{-jz} * (unscaled-to-scaled conversion of H2 for Y recovery):
// H2 e^{-|Im z|} = H2_s * hfac(z).
cplx hfac(cplx z) {
  double im = z.imag();
  return std::exp(cplx(im - std::abs(im), -z.real()));
}

// Orders 0 and 1 only: one downward pass, no storage. Returns scaled J0, J1
// and Y0, Y1 (scaling e^{-|Im z|}).
struct Miller01 {
  cplx j0, j1, y0, y1;
};

Miller01 miller01(cplx z) {
  const double az = std::abs(z);
  const int N = miller_start(1, az);
  const bool lower = z.imag() <= 0.0;
  static const cplx up[4] = {1.0, kJ, -1.0, -kJ};
  static const cplx dn[4] = {1.0, -kJ, -1.0, kJ};
  const cplx* pw = lower ? up : dn;
  const cplx two_over_z = 2.0 / z;
  cplx norm = 0.0, s0 = 0.0, s1 = 0.0;
  cplx fp1 = 0.0, fk = 1e-30, f1 = 0.0;
  for (int i = N; i >= 0; --i) {
    // fk holds f_i
    if (i >= 1) norm += 2.0 * pw[i & 3] * fk;
    else norm += fk;
    if (i >= 2 && i % 2 == 0) {
      const int k = i / 2;
      s0 += ((k % 2 == 0) ? 1.0 : -1.0) / k * fk;
    } else if (i % 2 == 1) {
      const int k = (i + 1) / 2;  // f_{2k-1}
      s1 += ((k % 2 == 0) ? 1.0 : -1.0) / k * fk;
      if (i >= 3) {
        const int k2 = (i - 1) / 2;  // f_{2k2+1}
        s1 -= ((k2 % 2 == 0) ? 1.0 : -1.0) / k2 * fk;
      }
    }
    if (i == 1) f1 = fk;
    if (i == 0) break;
    const cplx fm1 = (double(i) * two_over_z) * fk - fp1;
    fp1 = fk;
    fk = fm1;
    if (std::abs(fk) > 1e250) {
      fk *= 1e-250;
      fp1 *= 1e-250;
      norm *= 1e-250;
      s0 *= 1e-250;
      s1 *= 1e-250;
      f1 *= 1e-250;
    }
  }
  const cplx phase = std::exp((lower ? 1.0 : -1.0) * kJ * z.real());
  const cplx scale = phase / norm;
  Miller01 m;
  m.j0 = fk * scale;
  m.j1 = f1 * scale;
  s0 *= scale;
  s1 *= scale;
  const cplx L = std::log(0.5 * z) + kEulerGamma;
  m.y0 = (2.0 / kPi) * L * m.j0 - (4.0 / kPi) * s0;
  m.y1 = -(2.0 / kPi) * (m.j0 / z - L * m.j1) + (2.0 / kPi) * s1;
  return m;
}

// Scaled H2 orders 0, 1 only (H2_s = H2 e^{jz}).
std::pair<cplx, cplx> hankel01_scaled(cplx z) {
  const double az = std::abs(z);
  if (az >= kAsymptoticRadius) {
    const cplx pre = std::sqrt(2.0 / (kPi * z));
    return {pre * std::exp(kJ * (kPi / 4)) * hankel_asym_sum(0, z, -1.0),
            pre * std::exp(kJ * (3 * kPi / 4)) * hankel_asym_sum(1, z, -1.0)};
  }
  if (az > kSeriesRadius && z.imag() < -2.0) return hankel_integral01(z);
  if (az > kSeriesRadius) {
    const Miller01 m = miller01(z);
    const cplx w = std::exp(cplx(std::abs(z.imag()) - z.imag(), z.real()));
    return {(m.j0 - kJ * m.y0) * w, (m.j1 - kJ * m.y1) * w};
  }
  const cplx j0 = series_j(0, z), j1 = series_j(1, z);
  auto [y0, y1] = series_y01(z, j0, j1);
  const cplx hs = std::exp(kJ * z);
  return {(j0 - kJ * y0) * hs, (j1 - kJ * y1) * hs};
}

Pair01 orders01(cplx z) {
  const double az = std::abs(z);
  Pair01 p;
  if (az <= kSeriesRadius) {
    cplx j0 = series_j(0, z), j1 = series_j(1, z);
    auto [y0, y1] = series_y01(z, j0, j1);
    double sc = std::exp(-std::abs(z.imag()));
    cplx hs = std::exp(kJ * z);
    p.j0 = j0 * sc;
    p.j1 = j1 * sc;
    p.h0 = (j0 - kJ * y0) * hs;
    p.h1 = (j1 - kJ * y1) * hs;
    return p;
  }
  if (az >= kAsymptoticRadius) {
    const cplx pre = std::sqrt(2.0 / (kPi * z));
    const double im = z.imag(), aim = std::abs(im);
    // H1 e^{-|Im z|} and H2 e^{-|Im z|}; H2_s separately.
    for (int n = 0; n <= 1; ++n) {
      const double phi = n * kPi / 2 + kPi / 4;
      cplx s1 = hankel_asym_sum(n, z, +1.0), s2 = hankel_asym_sum(n, z, -1.0);
      cplx h2s = pre * std::exp(kJ * phi) * s2;
      cplx h1e = pre * std::exp(cplx(-im - aim, z.real() - phi)) * s1;
      cplx h2e = h2s * hfac(z);
      cplx js = 0.5 * (h1e + h2e);
      (n == 0 ? p.j0 : p.j1) = js;
      (n == 0 ? p.h0 : p.h1) = h2s;
    }
    return p;
  }
  const Miller01 m = miller01(z);
  p.j0 = m.j0;
  p.j1 = m.j1;
  if (z.imag() < -2.0) {
    auto [h0, h1] = hankel_integral01(z);
    p.h0 = h0;
    p.h1 = h1;
  } else {
    // back to H2_s: multiply by e^{|Im z|} e^{jz}
    const cplx w = std::exp(cplx(std::abs(z.imag()) - z.imag(), z.real()));
    p.h0 = (m.j0 - kJ * m.y0) * w;
    p.h1 = (m.j1 - kJ * m.y1) * w;
  }
  return p;
}

void check_nonzero(cplx z, const char* who) {
  if (z == cplx(0.0)) throw DomainError(std::string(who) + ": singular at z = 0");
}

double checked_exp(double x, const char* who) {
  if (x > kMaxExponent) throw OverflowError(std::string(who) + ": result exceeds double range");
  return std::exp(x);
}

// (-1)^n sign for negative orders.
double reflect(int& n) {
  if (n >= 0) return 1.0;
  n = -n;
  return (n % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

int max_order(cplx z) { return 2 * int(std::ceil(std::abs(z))) + 200; }

CVector bessel_j_sequence_scaled(int nmax, cplx z) {
  CVector out(nmax + 1);
  if (std::abs(z) <= kSeriesRadius) {
    double sc = std::exp(-std::abs(z.imag()));
    for (int n = 0; n <= nmax; ++n) out[n] = series_j(n, z) * sc;
    return out;
  }
  std::vector<cplx> js = miller_scaled(nmax, z);
  for (int n = 0; n <= nmax; ++n) out[n] = js[n];
  return out;
}

CVector hankel2_sequence_scaled(int nmax, cplx z) {
  check_nonzero(z, "hankel2");
  Pair01 p = orders01(z);
  CVector out(nmax + 1);
  out[0] = p.h0;
  if (nmax >= 1) out[1] = p.h1;
  for (int n = 1; n < nmax; ++n) out[n + 1] = (2.0 * n / z) * out[n] - out[n - 1];
  return out;
}

static cplx bessel_j_scaled_impl(int n, cplx z) {
  double sg = reflect(n);
  if (z == cplx(0.0)) return n == 0 ? 1.0 : 0.0;
  if (std::abs(z) <= kSeriesRadius) return sg * series_j(n, z) * std::exp(-std::abs(z.imag()));
  if (n <= 1 && std::abs(z) >= kAsymptoticRadius) {
    Pair01 p = orders01(z);
    return sg * (n == 0 ? p.j0 : p.j1);
  }
  return sg * miller_scaled(n, z)[n];
}

cplx bessel_j_scaled(int n, cplx z) {
  if (z.imag() == 0.0) return bessel_j_scaled_impl(n, z).real();
  return bessel_j_scaled_impl(n, z);
}

cplx hankel2_scaled(int n, cplx z) {
  double sg = reflect(n);
  check_nonzero(z, "hankel2");
  return sg * hankel2_sequence_scaled(std::max(n, 1), z)[n];
}

cplx bessel_y_scaled(int n, cplx z) {
  double sg = reflect(n);
  check_nonzero(z, "bessel_y");
  // J, Y real on the positive axis; drop the roundoff imaginary part
  const bool real_axis = z.imag() == 0.0 && z.real() > 0.0;
  CVector h = hankel2_sequence_scaled(std::max(n, 1), z);
  cplx js = bessel_j_scaled(n, z);
  const cplx y = sg * (js - h[n] * hfac(z)) / kJ;
  return real_axis ? cplx(y.real()) : y;
}

cplx bessel_j(int n, cplx z) {
  cplx s = bessel_j_scaled(n, z);
  return s * checked_exp(std::abs(z.imag()), "bessel_j");
}

cplx bessel_y(int n, cplx z) {
  cplx s = bessel_y_scaled(n, z);
  return s * checked_exp(std::abs(z.imag()), "bessel_y");
}

cplx hankel2(int n, cplx z) {
  cplx s = hankel2_scaled(n, z);
  // H2 = H2_s e^{-jz}; |e^{-jz}| = e^{Im z}
  checked_exp(z.imag(), "hankel2");
  return s * std::exp(-kJ * z);
}

Hankel01 hankel2_01(cplx z) {
  check_nonzero(z, "hankel2");
  if (z.imag() > kMaxExponent) throw OverflowError("hankel2: result exceeds double range");
  auto [h0, h1] = hankel01_scaled(z);
  const cplx e = std::exp(-kJ * z);
  return {h0 * e, h1 * e};
}

}  // namespace tmscat
