#pragma once

#include <vector>

namespace tmscat {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

inline constexpr int kMaxGaussOrder = 64;

// Gauss-Legendre rule of order n (1 <= n <= kMaxGaussOrder). Tables are built
// once on first use and shared read-only afterwards.
const GaussRule& gauss_legendre(int n);

// Integrate f over [a, b] with the n-point rule.
template <typename F>
auto integrate(F&& f, double a, double b, int n) {
  const GaussRule& g = gauss_legendre(n);
  const double h = 0.5 * (b - a), c = 0.5 * (b + a);
  decltype(f(a)) acc{};
  for (int i = 0; i < n; ++i) acc += g.w[i] * f(c + h * g.x[i]);
  return acc * h;
}

}  // namespace tmscat
