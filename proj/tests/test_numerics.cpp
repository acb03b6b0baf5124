#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "atwist/numerics.hpp"

using namespace atw;

TEST_CASE("gamma function") {
  CHECK(gamma_fn(cplx(1.0, 0.0)).real() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(gamma_fn(cplx(5.0, 0.0)).real() == doctest::Approx(24.0).epsilon(1e-13));
  CHECK(gamma_fn(cplx(0.5, 0.0)).real() ==
        doctest::Approx(std::sqrt(3.14159265358979323846)).epsilon(1e-13));
  // recurrence Gamma(z+1) = z Gamma(z) off the real axis
  cplx z(0.7, 1.3);
  CHECK(std::abs(gamma_fn(z + 1.0) - z * gamma_fn(z)) < 1e-13 * std::abs(gamma_fn(z + 1.0)));
}

TEST_CASE("upper incomplete gamma") {
  // Gamma(1, x) = e^{-x}
  for (double x : {0.1, 0.7, 2.0, 5.0, 17.0, 40.0}) {
    CHECK(upper_gamma(cplx(1.0, 0.0), x).real() == doctest::Approx(std::exp(-x)).epsilon(1e-12));
  }
  // Gamma(s, 0) = Gamma(s)
  CHECK(std::abs(upper_gamma(cplx(1.3, 0.0), 0.0) - gamma_fn(cplx(1.3, 0.0))) < 1e-12);
  // Gamma(2, x) = (x + 1) e^{-x}
  for (double x : {0.5, 3.0, 9.0})
    CHECK(upper_gamma(cplx(2.0, 0.0), x).real() ==
          doctest::Approx((x + 1.0) * std::exp(-x)).epsilon(1e-12));
  // recurrence Gamma(s+1, x) = s Gamma(s, x) + x^s e^{-x} across the
  // series/continued-fraction switchover
  for (double s : {0.7, 1.0, 1.3}) {
    for (double x = 0.25; x < 30.0; x *= 1.7) {
      cplx ss(s, 0.0);
      cplx lhs = upper_gamma(ss + 1.0, x);
      cplx rhs = ss * upper_gamma(ss, x) + std::pow(x, s) * std::exp(-x);
      CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("V kernel: production vs vertical-line oracle") {
  SmoothingKernel k;
  for (double y : {0.02, 0.1, 0.3, 1.0, 2.0}) {
    double a = V_value(y);
    double b = V_line_oracle(k, y);
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
}

TEST_CASE("V kernel: trapezoid parameter halving is converged") {
  SmoothingKernel k;
  SmoothingKernel k2{2.0, 8.0, 0.025};
  for (double y : {0.05, 0.3, 1.0}) {
    CHECK(std::abs(V_line_oracle(k, y) - V_line_oracle(k2, y)) < 1e-12);
  }
}

TEST_CASE("V kernel: limits and residue expansion") {
  // V monotone increasing, in (0, 1)
  const auto& V = VTable::instance();
  double prev = 0.0;
  for (double ly = -10.0; ly <= 10.0; ly += 0.25) {
    double v = V(std::exp(ly));
    CHECK(v >= prev - 1e-15);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
  // y -> infinity: V(y) = 1 - e/(2 pi y) + e^4/(2 (2 pi y)^2) - ... (Gamma residues
  // against G(u) = exp(u^2))
  for (double y : {300.0, 1000.0, 5000.0}) {
    double x = 2.0 * 3.14159265358979323846 * y;
    double expect = 1.0 - std::exp(1.0) / x + std::exp(4.0) / (2.0 * x * x) -
                    std::exp(9.0) / (6.0 * x * x * x);
    CHECK(V_value(y) == doctest::Approx(expect).epsilon(1e-7));
  }
  // small y: |V(y)| <= C y^2 from the sigma = 2 line
  for (double y : {1e-3, 1e-4}) CHECK(V_value(y) <= 600.0 * y * y);
}

TEST_CASE("VTable matches direct evaluation") {
  const auto& V = VTable::instance();
  for (double y : {0.0123, 0.37, 1.7, 19.0, 801.0}) {
    CHECK(V(y) == doctest::Approx(V_value(y)).epsilon(1e-10));
  }
  double y9 = V.y_for_threshold(1e-9);
  CHECK(V_value(y9) <= 1.1e-9);
  CHECK(V_value(y9 * 1.3) > 1e-9);
}

TEST_CASE("adaptive simpson") {
  double err = 0.0;
  cplx v = adaptive_simpson([](double t) { return cplx(std::exp(-t * t), 0.0); }, -8.0, 8.0,
                            1e-12, 30, &err);
  CHECK(v.real() == doctest::Approx(std::sqrt(3.14159265358979323846)).epsilon(1e-11));
}
