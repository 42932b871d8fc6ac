#include <doctest.h>

#include <random>

#include "oracles/bessel_series.hpp"
#include "tmscat/special_functions.hpp"

using namespace tmscat;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("tabulated values at z = 1") {
  CHECK(bessel_j(0, 1.0).real() == doctest::Approx(0.7651976865579666).epsilon(1e-13));
  CHECK(bessel_y(0, 1.0).real() == doctest::Approx(0.08825696421567696).epsilon(1e-13));
  CHECK(bessel_j(1, 1.0).real() == doctest::Approx(0.4400505857449335).epsilon(1e-13));
  CHECK(bessel_y(1, 1.0).real() == doctest::Approx(-0.7812128213002887).epsilon(1e-13));
}

TEST_CASE("real argument gives real J and Y") {
  for (double x : {0.3, 1.0, 4.5, 11.0, 27.0, 80.0}) {
    for (int n = 0; n < 4; ++n) {
      CHECK(bessel_j(n, x).imag() == 0.0);
      CHECK(bessel_y(n, x).imag() == 0.0);
    }
  }
}

TEST_CASE("against the multiprecision series") {
  const cplx pts[] = {{0.1, 0.0}, {1.0, 0.0}, {2.0, -1.0}, {3.7, 0.0}, {5.0, -0.5},
                      {9.0, -3.0}, {14.0, -1.0}, {18.0, 0.0}, {6.0, -7.0}, {0.5, -0.5}};
  for (cplx z : pts) {
    CAPTURE(z);
    CHECK(rel(hankel2(0, z), oracle::H2(0, z)) < 1e-12);
    CHECK(rel(hankel2(1, z), oracle::H2(1, z)) < 1e-12);
    CHECK(std::abs(bessel_j(0, z) - oracle::J(0, z)) < 1e-12 * std::max(1.0, std::abs(oracle::J(0, z))) * std::exp(std::abs(z.imag())) );
    CHECK(std::abs(bessel_y(0, z) - oracle::Y0(z)) < 1e-12 * std::exp(std::abs(z.imag())) * std::max(1.0, std::abs(oracle::Y0(z))));
    CHECK(std::abs(bessel_y(1, z) - oracle::Y1(z)) < 1e-12 * std::exp(std::abs(z.imag())) * std::max(1.0, std::abs(oracle::Y1(z))));
    for (int n = 2; n < 6; ++n) CHECK(rel(bessel_j(n, z), oracle::J(n, z)) < 1e-10);
  }
}

TEST_CASE("H2(2 - j)") {
  const cplx z{2.0, -1.0};
  CHECK(rel(hankel2(1, z), oracle::H2(1, z)) < 1e-13);
  const auto h = hankel2_01(z);
  CHECK(rel(h.h1, oracle::H2(1, z)) < 1e-13);
  CHECK(rel(h.h0, oracle::H2(0, z)) < 1e-13);
}

TEST_CASE("Wronskian J1 Y0 - J0 Y1 = 2/(pi z)") {
  auto w = [](cplx z) {
    return bessel_j(1, z) * bessel_y(0, z) - bessel_j(0, z) * bessel_y(1, z);
  };
  CHECK(rel(w(3.7), 2.0 / (kPi * 3.7)) < 1e-12);

  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> mod(0.1, 50.0), ang(0.0, 1.0);
  int checked = 0;
  while (checked < 100) {
    const double r = mod(gen);
    const double im = -5.0 * ang(gen);
    if (std::abs(im) >= r) continue;
    const cplx z{std::sqrt(r * r - im * im), im};
    // scaled functions carry e^{-2|Im z|} on the product
    const cplx ws = bessel_j_scaled(1, z) * bessel_y_scaled(0, z) - bessel_j_scaled(0, z) * bessel_y_scaled(1, z);
    const cplx expect = 2.0 / (kPi * z) * std::exp(-2.0 * std::abs(z.imag()));
    CAPTURE(z);
    CHECK(std::abs(ws - expect) < 1e-9 * std::abs(expect));
    ++checked;
  }
}

TEST_CASE("three-term recurrence") {
  for (cplx z : {cplx{0.7, 0.0}, cplx{4.2, -0.3}, cplx{12.0, -2.5}, cplx{30.0, -1.0}}) {
    for (int n = 1; n < 5; ++n) {
      CAPTURE(z);
      CAPTURE(n);
      const cplx c = 2.0 * double(n) / z;
      CHECK(std::abs(bessel_j(n - 1, z) + bessel_j(n + 1, z) - c * bessel_j(n, z)) <
            1e-11 * std::exp(std::abs(z.imag())) * std::max(1.0, std::abs(c * bessel_j(n, z))));
      const cplx h = hankel2_scaled(n, z);
      CHECK(std::abs(hankel2_scaled(n - 1, z) + hankel2_scaled(n + 1, z) - c * h) < 1e-11 * std::abs(c * h));
      const cplx y = bessel_y(n, z);
      CHECK(std::abs(bessel_y(n - 1, z) + bessel_y(n + 1, z) - c * y) <
            1e-10 * std::exp(std::abs(z.imag())) * std::max(1.0, std::abs(c * y)));
    }
  }
}

TEST_CASE("sequences agree with single-order calls") {
  const cplx z{7.5, -1.2};
  const CVector js = bessel_j_sequence_scaled(10, z);
  const CVector hs = hankel2_sequence_scaled(10, z);
  REQUIRE(js.size() == 11);
  for (int n = 0; n <= 10; ++n) {
    CHECK(rel(js[n], bessel_j_scaled(n, z)) < 1e-11);
    CHECK(rel(hs[n], hankel2_scaled(n, z)) < 1e-11);
  }
}

TEST_CASE("large argument") {
  CHECK(std::abs(hankel2(0, 200.0)) == doctest::Approx(std::sqrt(2.0 / (kPi * 200.0))).epsilon(0.01));
  // fast path and general path agree across the region boundaries
  for (double x : {1.99, 2.01, 19.9, 20.1, 45.0}) {
    for (double y : {0.0, -1.9, -2.1, -6.0}) {
      const cplx z{x, y};
      CAPTURE(z);
      const auto h = hankel2_01(z);
      CHECK(rel(h.h0, hankel2(0, z)) < 1e-12);
      CHECK(rel(h.h1, hankel2(1, z)) < 1e-12);
    }
  }
}

TEST_CASE("domain and overflow") {
  CHECK(bessel_j(0, 0.0) == cplx{1.0, 0.0});
  CHECK(bessel_j(3, 0.0) == cplx{0.0, 0.0});
  CHECK_THROWS_AS(bessel_y(0, 0.0), DomainError);
  CHECK_THROWS_AS(hankel2(1, 0.0), DomainError);
  CHECK_THROWS_AS(hankel2_01(0.0), DomainError);
  CHECK_THROWS_AS(bessel_j(0, cplx{1.0, -800.0}), OverflowError);
  CHECK(std::isfinite(std::abs(bessel_j_scaled(0, cplx{1.0, -800.0}))));
}
