#include "tmscat/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "tmscat/types.hpp"

namespace tmscat {

namespace {

// P_n(x) and P_{n-1}(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

GaussRule build_rule(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [pn, pm] = legendre(n, x);
      double dx = pn / (n * (x * pn - pm) / (x * x - 1.0));
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    auto [pn, pm] = legendre(n, x);
    double dp = n * (x * pn - pm) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static const auto tables = [] {
    std::array<GaussRule, kMaxGaussOrder + 1> t;
    for (int k = 1; k <= kMaxGaussOrder; ++k) t[k] = build_rule(k);
    return t;
  }();
  if (n < 1 || n > kMaxGaussOrder) throw std::out_of_range("gauss_legendre: unsupported order");
  return tables[n];
}

}  // namespace tmscat
