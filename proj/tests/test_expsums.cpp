#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "atwist/expsums.hpp"

using namespace atw;

TEST_CASE("kloosterman basics") {
  // S(0, 0; c) = phi(c)
  for (i64 c = 1; c <= 50; ++c) {
    auto s = kloosterman(0, 0, c);
    CHECK(s.real() == doctest::Approx(static_cast<double>(euler_phi(c))).epsilon(1e-9));
  }
  // S(1, 1; 2): single term x = xbar = 1: e(2/2) = 1
  CHECK(kloosterman(1, 1, 2).real() == doctest::Approx(1.0));
  // S(1, 2; 5) brute check
  std::complex<double> expected = 0.0;
  for (i64 x = 1; x < 5; ++x) {
    i64 xb = mod_inv(x, 5);
    double t = 2.0 * 3.14159265358979323846 * static_cast<double>((x + 2 * xb) % 5) / 5.0;
    expected += std::complex<double>(std::cos(t), std::sin(t));
  }
  CHECK(std::abs(kloosterman(1, 2, 5) - expected) < 1e-12);
  CHECK(std::abs(kloosterman(1, 2, 5)) <= std::sqrt(5.0) * 2.0);
}

TEST_CASE("symmetry and realness") {
  for (i64 c = 1; c <= 40; ++c)
    for (i64 m = 0; m <= 6; ++m)
      for (i64 n = 0; n <= 6; ++n) {
        auto a = kloosterman(m, n, c);
        auto b = kloosterman(n, m, c);
        CHECK(std::abs(a - b) < 1e-9);
        CHECK(std::abs(a.imag()) < 1e-9);
      }
}

TEST_CASE("twisted multiplicativity") {
  // S(m, n; c1 c2) = S(m cbar2^2, n; c1) S(m cbar1^2, n; c2), gcd(c1, c2) = 1
  for (i64 c1 = 2; c1 <= 14; ++c1)
    for (i64 c2 = c1 + 1; c1 * c2 <= 200; ++c2) {
      if (std::gcd(c1, c2) != 1) continue;
      for (i64 m : {1, 3})
        for (i64 n : {1, 2}) {
          i64 cb2 = mod_inv(c2 % c1, c1);
          i64 cb1 = mod_inv(c1 % c2, c2);
          auto lhs = kloosterman(m, n, c1 * c2);
          auto rhs = kloosterman(m * cb2 % c1 * cb2 % c1, n, c1) *
                     kloosterman(m * cb1 % c2 * cb1 % c2, n, c2);
          CHECK(std::abs(lhs - rhs) < 1e-8);
        }
    }
}

TEST_CASE("weil bound report") {
  auto rows = weil_bound_report(6, 6, 60);
  CHECK(!rows.empty());
  for (size_t i = 0; i + 1 < rows.size(); ++i) CHECK(rows[i].ratio >= rows[i + 1].ratio);
  for (const auto& r : rows) CHECK(r.ratio <= 1.0 + 1e-12);
  // S(0, n; c) is a Ramanujan sum; |S| <= gcd(n, c)
  for (i64 c = 1; c <= 40; ++c)
    for (i64 n = 1; n <= 10; ++n)
      CHECK(std::abs(kloosterman(0, n, c)) <= static_cast<double>(std::gcd(n, c)) + 1e-9);
  CHECK(weil_bound_report(-1, 5, 5).empty());
}
