#include "tmscat/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tmscat/quadrature.hpp"
#include "tmscat/special_functions.hpp"

namespace tmscat {

Kernel make_kernel(const Medium& m, double freq) {
  return {wavenumber(m, freq), angular_frequency(freq), kMu0 * m.mu_r};
}

cplx green(cplx k, double rho) {
  if (!(rho > 0)) throw DomainError("green: rho must be positive");
  return -0.25 * kJ * hankel2_01(k * rho).h0;
}

namespace {

// Beyond |Im k| * distance = kDecayCut the kernel is below e^-45 of its
// near-field size and the pair is dropped.
constexpr double kDecayCut = 45.0;
constexpr double kGrade = 0.2;

double point_segment_dist(const Point& p, const Point& a, const Point& b) {
  Point ab = b - a;
  double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double cross2(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double segment_dist(const Point& a0, const Point& a1, const Point& b0, const Point& b1) {
  double d1 = cross2(a1 - a0, b0 - a0), d2 = cross2(a1 - a0, b1 - a0);
  double d3 = cross2(b1 - b0, a0 - b0), d4 = cross2(b1 - b0, a1 - b0);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return 0.0;
  return std::min({point_segment_dist(a0, b0, b1), point_segment_dist(a1, b0, b1),
                   point_segment_dist(b0, a0, a1), point_segment_dist(b1, a0, a1)});
}

// Raw sums for one test/source segment pair, constants applied later.
//   h0:   sum w H0
//   u_ts: sum w (d.n_s)/rho H1   (entry U[test, source])
//   u_st: sum w (-d.n_t)/rho H1  (entry U[source, test])
struct Acc {
  cplx h0{0.0}, u_ts{0.0}, u_st{0.0};
};

struct PairCtx {
  cplx k;
  double im_k, abs_k;
  Point n_t, n_s;
  int bump;
};

inline void add_point(Acc& acc, const PairCtx& c, const Point& x, const Point& y, double w) {
  Point d = y - x;
  double rho = d.norm();
  Hankel01 h = hankel2_01(c.k * rho);
  acc.h0 += w * h.h0;
  acc.u_ts += (w * d.dot(c.n_s) / rho) * h.h1;
  acc.u_st += (-w * d.dot(c.n_t) / rho) * h.h1;
}

void tensor_gauss(Acc& acc, const PairCtx& c, const Point& a0, const Point& a1, const Point& b0,
                  const Point& b1, int q) {
  const GaussRule& g = gauss_legendre(q);
  const double ja = 0.5 * (a1 - a0).norm(), jb = 0.5 * (b1 - b0).norm();
  const Point ca = 0.5 * (a0 + a1), ha = 0.5 * (a1 - a0);
  const Point cb = 0.5 * (b0 + b1), hb = 0.5 * (b1 - b0);
  for (int i = 0; i < q; ++i) {
    Point x = ca + g.x[i] * ha;
    for (int j = 0; j < q; ++j) add_point(acc, c, x, cb + g.x[j] * hb, g.w[i] * g.w[j] * ja * jb);
  }
}

// Well-separated or recursively split pair.
void regular_pair(Acc& acc, const PairCtx& c, const Point& a0, const Point& a1, const Point& b0,
                  const Point& b1, int depth) {
  const double la = (a1 - a0).norm(), lb = (b1 - b0).norm();
  const double dist = segment_dist(a0, a1, b0, b1);
  if (dist * c.im_k > kDecayCut) return;
  const double lmax = std::max(la, lb);
  // slack: collinear pieces sit exactly on the thresholds, let roundoff not decide
  const double ratio = dist / lmax + 1e-9;
  const bool unresolved = c.abs_k * lmax > 3.0;
  if ((ratio < 1.0 || unresolved) && depth < 20) {
    // equal lengths: split both, so the rule does not depend on which
    // segment is the test one (keeps mirror-image pairs bit-compatible)
    if (std::abs(la - lb) <= 1e-9 * lmax) {
      const Point ma = 0.5 * (a0 + a1), mb = 0.5 * (b0 + b1);
      regular_pair(acc, c, a0, ma, b0, mb, depth + 1);
      regular_pair(acc, c, a0, ma, mb, b1, depth + 1);
      regular_pair(acc, c, ma, a1, b0, mb, depth + 1);
      regular_pair(acc, c, ma, a1, mb, b1, depth + 1);
    } else if (la > lb) {
      Point m = 0.5 * (a0 + a1);
      regular_pair(acc, c, a0, m, b0, b1, depth + 1);
      regular_pair(acc, c, m, a1, b0, b1, depth + 1);
    } else {
      Point m = 0.5 * (b0 + b1);
      regular_pair(acc, c, a0, a1, b0, m, depth + 1);
      regular_pair(acc, c, a0, a1, m, b1, depth + 1);
    }
    return;
  }
  const int q = (ratio >= 4.0 ? 4 : ratio >= 2.0 ? 6 : 8) + c.bump;
  tensor_gauss(acc, c, a0, a1, b0, b1, q);
}

// Graded radial breakpoints on [0, top]: top, top*g, top*g^2, ..., 0; each
// graded panel is further split so |k| * scale * width stays below 2.
std::vector<double> graded_breaks(double top, double abs_k_scale) {
  std::vector<double> br;
  int levels = 8;
  while (levels < 40 && top * std::pow(kGrade, levels) * abs_k_scale > 1e-4) ++levels;
  double hi = top;
  for (int j = 0; j < levels; ++j) {
    double lo = hi * kGrade;
    int pieces = std::max(1, int(std::ceil(abs_k_scale * (hi - lo) / 2.0)));
    for (int p = 0; p < pieces; ++p) br.push_back(hi - (hi - lo) * p / pieces);
    hi = lo;
  }
  br.push_back(hi);
  br.push_back(0.0);
  return br;  // decreasing
}

// Segments sharing vertex V. Test points V + s*ea (s in [0, la]), source
// points V + t*eb. Duffy split of the unit square into two triangles, graded
// toward the shared corner.
void adjacent_pair(Acc& acc, const PairCtx& c, const Point& V, const Point& ea, double la,
                   const Point& eb, double lb) {
  const int qr = 8 + c.bump, qw = 10 + c.bump;
  const GaussRule& gr = gauss_legendre(qr);
  const GaussRule& gw = gauss_legendre(qw);
  const Point A = la * ea, B = lb * eb;
  for (int tri = 0; tri < 2; ++tri) {
    // tri 0: (x, y) = (r, r w); tri 1: (x, y) = (r w, r)
    const Point far_end = tri == 0 ? A : B;
    const Point other = tri == 0 ? B : A;
    const double cmin = point_segment_dist(far_end, Point(0, 0), other);
    const double cmax = std::max((A - B).norm(), far_end.norm());
    double top = 1.0;
    if (c.im_k * cmin > kDecayCut) top = kDecayCut / (c.im_k * cmin);
    std::vector<double> br = graded_breaks(top, c.abs_k * cmax);
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
      const double hi = br[p], lo = br[p + 1];
      const double hr = 0.5 * (hi - lo), cr = 0.5 * (hi + lo);
      for (int i = 0; i < qr; ++i) {
        const double r = cr + hr * gr.x[i];
        for (int j = 0; j < qw; ++j) {
          const double w = 0.5 * (1.0 + gw.x[j]);
          const double x = tri == 0 ? r : r * w, y = tri == 0 ? r * w : r;
          const double wt = gr.w[i] * hr * 0.5 * gw.w[j] * r * la * lb;
          add_point(acc, c, V + x * A, V + y * B, wt);
        }
      }
    }
  }
}

}  // namespace

cplx self_h0_integral(cplx k, double l) {
  const cplx alpha = 1.0 - kJ * (2.0 / kPi) * (std::log(0.5 * k) + kEulerGamma);
  const cplx beta = -kJ * (2.0 / kPi);
  const double im_k = std::abs(k.imag()), abs_k = std::abs(k);
  const double uc = im_k * l > kDecayCut ? kDecayCut / im_k : l;
  const double luc = std::log(uc);
  // int_0^uc 2(l - u)(alpha + beta ln u) du
  cplx analytic = alpha * (2 * l * uc - uc * uc) +
                  beta * (2 * l * uc * luc - 2 * l * uc - uc * uc * luc + 0.5 * uc * uc);
  // remainder H0(ku) - alpha - beta ln u, smooth (~ u^2 ln u) at 0
  std::vector<double> br = graded_breaks(uc, abs_k);
  const GaussRule& g = gauss_legendre(12);
  cplx rem = 0.0;
  for (std::size_t p = 0; p + 1 < br.size(); ++p) {
    const double hi = br[p], lo = br[p + 1];
    const double h = 0.5 * (hi - lo), cc = 0.5 * (hi + lo);
    for (int i = 0; i < 12; ++i) {
      const double u = cc + h * g.x[i];
      cplx r = hankel2_01(k * u).h0 - alpha - beta * std::log(u);
      rem += g.w[i] * h * 2.0 * (l - u) * r;
    }
  }
  return analytic + rem;
}

namespace {

bool close(const Point& a, const Point& b, double tol) { return (a - b).norm() <= tol; }

OperatorSet assemble_impl(const DiscretizedBoundary& test, const DiscretizedBoundary& src,
                          const Kernel& kern, const QuadratureOptions& opt, bool same) {
  const int M = test.size(), N = src.size();
  OperatorSet ops;
  ops.L = test.lengths;
  ops.P.resize(M, N);
  ops.U.resize(M, N);
  const cplx pc = 0.25 * kern.omega_mu();
  const cplx uc = -0.25 * kJ * kern.k;
  PairCtx ctx{kern.k, std::abs(kern.k.imag()), std::abs(kern.k), Point(), Point(), opt.order_bump};
  const int q0 = 4 + opt.order_bump;

  for (int m = 0; m < M; ++m) {
    const Point a0 = test.start(m), a1 = test.end(m);
    const double la = test.lengths[m];
    ctx.n_t = test.normals.col(m);
    for (int n = same ? m : 0; n < N; ++n) {
      const Point b0 = src.start(n), b1 = src.end(n);
      const double lb = src.lengths[n];
      ctx.n_s = src.normals.col(n);
      const double lmax = std::max(la, lb);
      // slack as in regular_pair: equal collinear segments give exact multiples of lmax
      const double gap = (test.midpoints.col(m) - src.midpoints.col(n)).norm() - 0.5 * (la + lb) + 1e-9 * lmax;
      Acc acc;
      bool self = false;
      if (gap >= 4.0 * lmax && ctx.abs_k * lmax <= 3.0) {
        // fewer points once the pair is far apart and well resolved
        const double kl = ctx.abs_k * lmax;
        const int q = gap >= 16.0 * lmax && kl <= 0.5 ? q0 - 2 : gap >= 8.0 * lmax && kl <= 1.5 ? q0 - 1 : q0;
        if (gap * ctx.im_k <= kDecayCut) tensor_gauss(acc, ctx, a0, a1, b0, b1, q);
      } else {
        const double tol = 1e-10 * (la + lb);
        if ((close(a0, b0, tol) && close(a1, b1, tol)) || (close(a0, b1, tol) && close(a1, b0, tol))) {
          self = true;
        } else if (close(a0, b0, tol) || close(a0, b1, tol) || close(a1, b0, tol) || close(a1, b1, tol)) {
          const Point V = (close(a0, b0, tol) || close(a0, b1, tol)) ? a0 : a1;
          const Point ea = (V == a0 ? a1 - a0 : a0 - a1) / la;
          const Point vb = close(V, b0, tol) ? b0 : b1;
          const Point eb = (vb == b0 ? b1 - b0 : b0 - b1) / lb;
          adjacent_pair(acc, ctx, V, ea, la, eb, lb);
        } else {
          if (segment_dist(a0, a1, b0, b1) <= tol)
            throw GeometryError("boundary segments overlap or intersect");
          regular_pair(acc, ctx, a0, a1, b0, b1, 0);
        }
      }
      if (self) {
        ops.P(m, n) = pc * self_h0_integral(kern.k, la);
        ops.U(m, n) = 0.0;
      } else {
        ops.P(m, n) = pc * acc.h0;
        ops.U(m, n) = uc * acc.u_ts;
      }
      if (same && n != m) {
        ops.P(n, m) = ops.P(m, n);
        ops.U(n, m) = self ? cplx(0.0) : uc * acc.u_st;
      }
    }
  }
  return ops;
}

}  // namespace

OperatorSet assemble(const DiscretizedBoundary& test, const DiscretizedBoundary& source,
                     const Kernel& kern, const QuadratureOptions& opt) {
  return assemble_impl(test, source, kern, opt, false);
}

OperatorSet assemble_self(const DiscretizedBoundary& db, const Kernel& kern, const QuadratureOptions& opt) {
  return assemble_impl(db, db, kern, opt, true);
}

CMatrix assemble_P(const DiscretizedBoundary& test, const DiscretizedBoundary& source,
                   const Kernel& kern, const QuadratureOptions& opt) {
  return assemble(test, source, kern, opt).P;
}

CMatrix assemble_U(const DiscretizedBoundary& test, const DiscretizedBoundary& source,
                   const Kernel& kern, const QuadratureOptions& opt) {
  return assemble(test, source, kern, opt).U;
}

CMatrix assemble_G(const DiscretizedBoundary& test, const DiscretizedBoundary& source,
                   const Kernel& kern, const QuadratureOptions& opt) {
  return -assemble(test, source, kern, opt).P;
}

}  // namespace tmscat
