#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "atwist/arith.hpp"

using namespace atw;

namespace {
// independent trial-division oracle
std::vector<std::pair<i64, int>> factor_oracle(i64 n) {
  std::vector<std::pair<i64, int>> out;
  for (i64 p = 2; p <= n; ++p) {
    int e = 0;
    while (n % p == 0) { n /= p; ++e; }
    if (e) out.push_back({p, e});
  }
  return out;
}
}  // namespace

TEST_CASE("factorize basics") {
  CHECK(factorize(1).factors.empty());
  auto f27 = factorize(27);
  REQUIRE(f27.factors.size() == 1);
  CHECK(f27.factors[0].p == 3);
  CHECK(f27.factors[0].e == 3);
  auto f = factorize(6936);
  REQUIRE(f.factors.size() == 3);
  CHECK(f.factors[0] == PrimePower{2, 3});
  CHECK(f.factors[1] == PrimePower{3, 1});
  CHECK(f.factors[2] == PrimePower{17, 2});
  CHECK_THROWS_AS(factorize(0), std::domain_error);
  for (i64 n = 1; n <= 500; ++n) {
    auto a = factorize(n);
    auto b = factor_oracle(n);
    REQUIRE(a.factors.size() == b.size());
    i64 prod = 1;
    for (size_t i = 0; i < b.size(); ++i) {
      CHECK(a.factors[i].p == b[i].first);
      CHECK(a.factors[i].e == b[i].second);
      for (int j = 0; j < a.factors[i].e; ++j) prod *= a.factors[i].p;
    }
    CHECK(prod == n);
  }
}

TEST_CASE("moebius and phi") {
  CHECK(moebius(1) == 1);
  CHECK(moebius(12) == 0);
  CHECK(moebius(30) == -1);
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(9) == 6);
  // brute count of coprime residues
  i64 count = 0;
  for (i64 a = 1; a <= 100; ++a)
    if (std::gcd(a, i64(100)) == 1) ++count;
  CHECK(euler_phi(100) == count);
  CHECK(euler_phi(100) == 40);
}

TEST_CASE("multiplicativity properties") {
  for (i64 m = 1; m <= 40; ++m)
    for (i64 n = 1; n <= 40; ++n) {
      if (std::gcd(m, n) != 1) continue;
      CHECK(euler_phi(m * n) == euler_phi(m) * euler_phi(n));
      CHECK(moebius(m * n) == moebius(m) * moebius(n));
      CHECK(sigma_real(-0.5, m * n) ==
            doctest::Approx(sigma_real(-0.5, m) * sigma_real(-0.5, n)).epsilon(1e-12));
    }
}

TEST_CASE("sigma_real") {
  CHECK(sigma_real(0.0, 12) == doctest::Approx(6.0));
  CHECK(sigma_real(-1.0, 6) == doctest::Approx(2.0));  // 1 + 1/2 + 1/3 + 1/6
  CHECK(sigma_real(1.7, 1) == doctest::Approx(1.0));
  CHECK(sigma0(12) == 6);
}

TEST_CASE("mod_inv") {
  CHECK(mod_inv(1, 7) == 1);
  CHECK(mod_inv(3, 11) == 4);
  CHECK_THROWS_AS(mod_inv(2, 4), std::domain_error);
  for (i64 m = 1; m <= 60; ++m)
    for (i64 a = 1; a < m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      i64 x = mod_inv(a, m);
      CHECK(((a * x) % m + m) % m == 1 % m);
      CHECK(x >= 0);
      CHECK(x < m);
    }
}

TEST_CASE("level_split examples") {
  auto s1 = level_split(27, 6);
  CHECK(s1.M_d == 2);
  CHECK(s1.r_d == 3);
  CHECK(s1.R_d == 27);
  CHECK(s1.R_d_prime == 27);
  auto s2 = level_split(11, 7);
  CHECK(s2.M_d == 7);
  CHECK(s2.r_d == 1);
  CHECK(s2.R_d == 11);
  CHECK(s2.R_d_prime == 11);
  auto s3 = level_split(27, 9);
  CHECK(s3.M_d == 1);
  CHECK(s3.r_d == 9);
  CHECK(s3.R_d == 27);
  CHECK(s3.R_d_prime == 81);
}

TEST_CASE("level_split invariants on a grid") {
  for (i64 q : {4, 8, 11, 12, 16, 27, 36, 49, 99, 200, 1024}) {
    for (i64 d = 1; d <= 400; ++d) {
      auto s = level_split(q, d);
      CHECK(s.M_d * s.r_d == d);
      CHECK(std::gcd(s.M_d, s.r_d) == 1);
      CHECK(s.R_d % s.r_d == 0);
      CHECK(q % s.R_d == 0);
      CHECK(std::gcd(s.R_d, q / s.R_d) == 1);
      CHECK(s.M_d % (q / s.R_d) == 0);
      CHECK(s.R_d_prime == lcm(s.R_d, s.r_d * s.r_d));
      CHECK(s.M_d * s.M_d * s.R_d_prime == lcm(q, d * d));
      for (const auto& pp : factorize(s.r_d).factors) CHECK(ord_p(d, pp.p) < ord_p(q, pp.p));
      for (const auto& pp : factorize(s.M_d).factors)
        if (q % pp.p == 0) CHECK(ord_p(d, pp.p) >= ord_p(q, pp.p));
      if (is_squarefree(q)) CHECK(s.r_d == 1);
    }
  }
}

TEST_CASE("crt_split") {
  auto s = level_split(27, 6);
  auto c = crt_split(5, s);
  CHECK(c.a1 == 1);
  CHECK(c.a2 == 1);
  CHECK((c.a1 * s.r_d + c.a2 * s.M_d) % s.d == 5 % s.d);
  CHECK_THROWS_AS(crt_split(3, s), std::domain_error);

  // reconstruction round-trip for all d <= 60
  for (i64 q : {11, 27, 45}) {
    for (i64 d = 1; d <= 60; ++d) {
      auto sp = level_split(q, d);
      for (i64 a = 0; a < d; ++a) {
        if (std::gcd(a == 0 ? d : a, d) != 1) continue;
        auto cc = crt_split(a, sp);
        CHECK(((cc.a1 * sp.r_d + cc.a2 * sp.M_d) % d + d) % d == a % d);
        if (sp.M_d > 1) CHECK(std::gcd(cc.a1, sp.M_d) == 1);
        if (sp.r_d > 1) CHECK(std::gcd(cc.a2, sp.r_d) == 1);
        if (sp.r_d == 1) CHECK(cc.a2 == 0);
      }
    }
  }
}

TEST_CASE("divisors") {
  CHECK(divisors(1) == std::vector<i64>{1});
  CHECK(divisors(12) == std::vector<i64>{1, 2, 3, 4, 6, 12});
}
