#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "atwist/ltwist.hpp"

using namespace atw;

namespace {
const CoefficientSeries& f11() {
  static CoefficientSeries f = eta_quotient_coeffs(eta_spec_level11(), 800000);
  return f;
}
const CoefficientSeries& f27() {
  static CoefficientSeries f = eta_quotient_coeffs(eta_spec_level27(), 800000);
  return f;
}
}  // namespace

TEST_CASE("additive twist construction") {
  auto tw = make_additive_twist(27, 5, 6);
  CHECK(tw.a1 == 1);
  CHECK(tw.a2 == 1);
  CHECK(((tw.a1 * tw.split.r_d + tw.a2 * tw.split.M_d) % 6 + 6) % 6 == 5);
  CHECK_THROWS_AS(make_additive_twist(27, 3, 6), std::domain_error);
}

TEST_CASE("lambda_direct: Y0-independence (internal consistency)") {
  const auto& f = f11();
  auto tw = make_additive_twist(11, 1, 3);
  for (cplx s : {cplx(1.0, 0.0), cplx(0.7, 0.0), cplx(1.3, 0.0)}) {
    ModularSeries g;
    g.level = f.level;
    g.weight = 2;
    g.c.assign(f.length() + 1, 0.0);
    for (i64 n = 1; n <= f.length(); ++n) g.c[n] = f.a(n);
    auto a = lambda_additive_twist(g, s, 1, 3, 1e-9, 0.0);
    auto b = lambda_additive_twist(g, s, 1, 3, 1e-9, 0.031);
    auto c = lambda_additive_twist(g, s, 1, 3, 1e-9, 0.182);
    CHECK(std::abs(a.value - b.value) < 2e-9);
    CHECK(std::abs(a.value - c.value) < 2e-9);
  }
}

TEST_CASE("lambda_direct: conjugation symmetry") {
  const auto& f = f11();
  for (auto [a, d] : std::vector<std::pair<i64, i64>>{{1, 2}, {1, 3}, {2, 5}, {3, 7}}) {
    auto twp = make_additive_twist(11, a, d);
    auto twm = make_additive_twist(11, -a, d);
    for (double s : {0.8, 1.0, 1.25}) {
      auto vp = lambda_direct(f, cplx(s, 0.0), twp, 1e-9);
      auto vm = lambda_direct(f, cplx(s, 0.0), twm, 1e-9);
      CHECK(std::abs(vm.value - std::conj(vp.value)) < 1e-9);
    }
  }
}

TEST_CASE("functional equation at level 11 (r_d = 1, Fricke flip)") {
  const auto& f = f11();
  ContragredientProvider provider(f);
  for (auto [a, d] : std::vector<std::pair<i64, i64>>{{0, 1}, {1, 2}, {1, 3}, {2, 5}, {3, 8}}) {
    auto tw = make_additive_twist(11, a, d);
    double norm = static_cast<double>(tw.split.M_d) * static_cast<double>(tw.split.M_d) *
                  static_cast<double>(tw.split.R_d_prime);
    for (double s : {0.7, 1.0, 1.3}) {
      auto lhs = lambda_direct(f, cplx(s, 0.0), tw, 1e-9);
      cplx lhs_n = std::pow(norm, s - 1.0) * lhs.value;
      auto rhs = functional_equation_rhs(f, cplx(s, 0.0), tw, provider, 1e-9);
      CHECK(std::abs(lhs_n - rhs.value) < 1e-6);
    }
  }
}

TEST_CASE("functional equation at level 11 with 11 | d") {
  const auto& f = f11();
  ContragredientProvider provider(f);
  auto tw = make_additive_twist(11, 4, 11);
  double norm = 121.0;  // M_d = 11, R_d' = 1
  CHECK(tw.split.M_d == 11);
  CHECK(tw.split.R_d_prime == 1);
  for (double s : {0.7, 1.0}) {
    auto lhs = lambda_direct(f, cplx(s, 0.0), tw, 1e-9);
    cplx lhs_n = std::pow(norm, s - 1.0) * lhs.value;
    auto rhs = functional_equation_rhs(f, cplx(s, 0.0), tw, provider, 1e-9);
    CHECK(std::abs(lhs_n - rhs.value) < 1e-6);
  }
}

TEST_CASE("functional equation at level 27 with r_d = 3 (character sum)") {
  const auto& f = f27();
  ContragredientProvider provider(f);
  // d = 3: M_d = 1, r_d = 3, R_d = R_d' = 27
  for (i64 a : {1, 2}) {
    auto tw = make_additive_twist(27, a, 3);
    CHECK(tw.split.r_d == 3);
    CHECK(tw.split.M_d == 1);
    double norm = 27.0;
    for (double s : {0.7, 1.0, 1.3}) {
      auto lhs = lambda_direct(f, cplx(s, 0.0), tw, 1e-9);
      cplx lhs_n = std::pow(norm, s - 1.0) * lhs.value;
      auto rhs = functional_equation_rhs(f, cplx(s, 0.0), tw, provider, 1e-9);
      CHECK(std::abs(lhs_n - rhs.value) < 1e-6);
    }
  }
}

TEST_CASE("functional equation at level 27 with d = 9 (primitive chi mod 9)") {
  const auto& f = f27();
  ContragredientProvider provider(f);
  auto tw = make_additive_twist(27, 2, 9);
  CHECK(tw.split.r_d == 9);
  CHECK(tw.split.M_d == 1);
  CHECK(tw.split.R_d_prime == 81);
  double norm = 81.0;
  double s = 1.0;
  auto lhs = lambda_direct(f, cplx(s, 0.0), tw, 1e-9);
  cplx lhs_n = std::pow(norm, s - 1.0) * lhs.value;
  auto rhs = functional_equation_rhs(f, cplx(s, 0.0), tw, provider, 1e-8);
  CHECK(std::abs(lhs_n - rhs.value) < 1e-6);
}

TEST_CASE("s = 1 double-flip involution") {
  const auto& f = f11();
  ContragredientProvider provider(f);
  auto tw = make_additive_twist(11, 1, 4);
  // evaluating the FE at s then at 2-s swaps the two sides; composing gives
  // back the original value
  double s = 1.3;
  double norm = static_cast<double>(tw.split.M_d * tw.split.M_d * tw.split.R_d_prime);
  auto direct_s = lambda_direct(f, cplx(s, 0.0), tw, 1e-9);
  auto rhs_s = functional_equation_rhs(f, cplx(s, 0.0), tw, provider, 1e-9);
  auto direct_2ms = lambda_direct(f, cplx(2.0 - s, 0.0), tw, 1e-9);
  auto rhs_2ms = functional_equation_rhs(f, cplx(2.0 - s, 0.0), tw, provider, 1e-9);
  CHECK(std::abs(std::pow(norm, s - 1.0) * direct_s.value - rhs_s.value) < 1e-6);
  CHECK(std::abs(std::pow(norm, 1.0 - s) * direct_2ms.value - rhs_2ms.value) < 1e-6);
}

TEST_CASE("AFE agrees with the direct oracle and is X-independent") {
  const auto& f = f11();
  ContragredientProvider provider(f);
  for (auto [a, d] : std::vector<std::pair<i64, i64>>{{0, 1}, {1, 2}, {3, 7}}) {
    auto tw = make_additive_twist(11, a, d);
    auto direct = lambda_direct(f, cplx(1.0, 0.0), tw, 1e-9);
    cplx expect = 2.0 * std::numbers::pi * direct.value;  // L(1) = 2 pi Lambda(1)
    cplx v1 = approx_L1(f, tw, provider, {.X = 1.0, .eps = 1e-8}).value;
    cplx vh = approx_L1(f, tw, provider, {.X = 0.5, .eps = 1e-8}).value;
    cplx v2 = approx_L1(f, tw, provider, {.X = 2.0, .eps = 1e-8}).value;
    CHECK(std::abs(v1 - expect) < 1e-6);
    CHECK(std::abs(vh - v1) < 1e-6);
    CHECK(std::abs(v2 - v1) < 1e-6);
  }
}

TEST_CASE("AFE at level 27 including the character-sum denominators") {
  const auto& f = f27();
  ContragredientProvider provider(f);
  for (auto [a, d] : std::vector<std::pair<i64, i64>>{{1, 3}, {5, 6}, {2, 9}}) {
    auto tw = make_additive_twist(27, a, d);
    auto direct = lambda_direct(f, cplx(1.0, 0.0), tw, 1e-9);
    cplx expect = 2.0 * std::numbers::pi * direct.value;
    cplx v = approx_L1(f, tw, provider, {.X = 1.0, .eps = 1e-8}).value;
    CHECK(std::abs(v - expect) < 1e-6);
  }
}

TEST_CASE("modular symbols: symmetry and realness") {
  const auto& f = f11();
  ContragredientProvider provider(f);
  auto s0 = modular_symbol(f, 0, 1, provider, {});
  CHECK(std::abs(s0.minus) == 0.0);
  auto s15 = modular_symbol(f, 1, 5, provider, {});
  auto s45 = modular_symbol(f, 4, 5, provider, {});
  CHECK(s15.plus == doctest::Approx(s45.plus).epsilon(1e-8));
  CHECK(std::abs(s15.minus + s45.minus) < 1e-8);
  // plus real / minus purely imaginary
  CHECK(std::abs(s15.minus.real()) < 1e-8);
  // route consistency: plus(0/1) = L(1, f) = 2 pi Lambda(1, f)
  auto tw = make_additive_twist(11, 0, 1);
  auto lam = lambda_direct(f, cplx(1.0, 0.0), tw, 1e-10);
  CHECK(s0.plus / (2.0 * std::numbers::pi * lam.value.real()) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("fe_character_moduli") {
  CHECK(fe_character_moduli(1) == std::vector<i64>{1});
  CHECK(fe_character_moduli(3) == std::vector<i64>{1, 3});
  CHECK(fe_character_moduli(9) == std::vector<i64>{9});
  CHECK(fe_character_moduli(12) == std::vector<i64>{4, 12});
}

TEST_CASE("modsym bound report shape") {
  const auto& f = f11();
  ContragredientProvider provider(f);
  auto rows = modsym_bound_report(f, 8, provider, {.eps = 1e-6});
  REQUIRE(rows.size() == 8);
  CHECK(rows[0].d == 1);
  for (auto& r : rows) {
    CHECK(std::isfinite(r.max_lambda));
    CHECK(r.ratio > 0.0);
  }
}
