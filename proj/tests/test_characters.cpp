#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <numeric>

#include "atwist/characters.hpp"

using namespace atw;

namespace {
cplx e_of(double turns) {
  return std::exp(cplx(0.0, 2.0 * 3.14159265358979323846 * turns));
}
}  // namespace

TEST_CASE("enumeration counts and distinctness") {
  CHECK(enumerate_characters(1).size() == 1);
  auto c3 = enumerate_characters(3);
  CHECK(c3.size() == 2);
  int prim3 = 0;
  for (auto& c : c3) prim3 += c.is_primitive();
  CHECK(prim3 == 1);
  auto c8 = enumerate_characters(8);
  CHECK(c8.size() == 4);
  int prim8 = 0;
  for (auto& c : c8) prim8 += c.is_primitive();
  CHECK(prim8 == 2);
  // full multiplicative-table oracle: distinct value vectors, all multiplicative
  for (i64 n : {5, 9, 12, 16, 24, 45}) {
    auto cs = enumerate_characters(n);
    CHECK(static_cast<i64>(cs.size()) == euler_phi(n));
    for (size_t i = 0; i < cs.size(); ++i)
      for (size_t j = i + 1; j < cs.size(); ++j) {
        bool same = true;
        for (i64 m = 0; m < n && same; ++m)
          if (std::abs(cs[i].eval(m) - cs[j].eval(m)) > 1e-9) same = false;
        CHECK(!same);
      }
    for (auto& chi : cs)
      for (i64 a = 0; a < n; ++a)
        for (i64 b = 0; b < n; ++b)
          CHECK(std::abs(chi.eval(a * b) - chi.eval(a) * chi.eval(b)) < 1e-12);
  }
}

TEST_CASE("eval basics") {
  DirichletCharacter triv;  // mod 1
  CHECK(triv.eval(0) == cplx(1.0, 0.0));
  CHECK(triv.eval(7) == cplx(1.0, 0.0));
  // quadratic mod 3
  auto c3 = enumerate_characters(3);
  const DirichletCharacter& quad = c3[0].is_trivial() ? c3[1] : c3[0];
  CHECK(quad.eval(2).real() == doctest::Approx(-1.0));
  CHECK(std::abs(quad.eval(3)) == 0.0);
  CHECK(quad.eval(1) == cplx(1.0, 0.0));
  CHECK(quad.parity() == -1);
}

TEST_CASE("conductor and primitive part") {
  // character mod 6 induced from quadratic mod 3
  for (auto& chi : enumerate_characters(6)) {
    if (chi.is_trivial()) {
      CHECK(chi.conductor() == 1);
    } else {
      CHECK(chi.conductor() == 3);
      auto chis = chi.primitive_part();
      CHECK(chis.modulus() == 3);
      for (i64 m = 1; m <= 20; ++m)
        if (std::gcd(m, i64(6)) == 1)
          CHECK(std::abs(chi.eval(m) - chis.eval(m)) < 1e-12);
    }
  }
}

TEST_CASE("gauss sums") {
  CHECK(gauss_sum(DirichletCharacter()) == cplx(1.0, 0.0));
  auto c3 = enumerate_characters(3);
  const DirichletCharacter& quad = c3[0].is_trivial() ? c3[1] : c3[0];
  cplx t = gauss_sum(quad);
  CHECK(t.real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t.imag() == doctest::Approx(std::sqrt(3.0)));
  // |tau(chi)| = sqrt(cond) for primitive chi, and tau conj(tau) = chi(-1) cond
  for (i64 r = 1; r <= 40; ++r) {
    for (auto& chi : enumerate_characters(r)) {
      if (!chi.is_primitive()) continue;
      cplx tau = gauss_sum(chi);
      CHECK(std::abs(tau) == doctest::Approx(std::sqrt(static_cast<double>(r))).epsilon(1e-9));
      cplx prod = tau * gauss_sum(chi.conj());
      CHECK(prod.real() ==
            doctest::Approx(chi.parity() * static_cast<double>(r)).epsilon(1e-9));
      CHECK(prod.imag() == doctest::Approx(0.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("generalized gauss sum closed form vs brute force") {
  // Ramanujan special case: chi trivial mod r, gcd(m, r) = 1 -> mu(r)
  for (i64 r = 1; r <= 30; ++r) {
    DirichletCharacter triv = enumerate_characters(r)[0].is_trivial()
                                  ? enumerate_characters(r)[0]
                                  : DirichletCharacter(r, std::vector<i64>(
                                        enumerate_characters(r)[0].exponents().size(), 0));
    for (i64 m = 1; m <= r; ++m) {
      if (std::gcd(m, r) != 1) continue;
      cplx v = generalized_gauss_sum(triv, m);
      CHECK(v.real() == doctest::Approx(static_cast<double>(moebius(r))).epsilon(1e-9));
      CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-9));
    }
  }
  // primitive chi: c_chi(m) = conj(chi)(m) tau(chi) for gcd(m, r) = 1
  for (i64 r = 2; r <= 24; ++r) {
    for (auto& chi : enumerate_characters(r)) {
      if (!chi.is_primitive()) continue;
      cplx tau = gauss_sum(chi);
      for (i64 m = 1; m < r; ++m) {
        if (std::gcd(m, r) != 1) continue;
        CHECK(std::abs(generalized_gauss_sum(chi, m) - chi.conj().eval(m) * tau) < 1e-9);
      }
    }
  }
  // full sweep: closed form equals brute force for all r <= 60, all chi, 0 <= m < 2r
  for (i64 r = 1; r <= 60; ++r) {
    for (auto& chi : enumerate_characters(r)) {
      for (i64 m = 0; m < 2 * r; ++m) {
        cplx a = generalized_gauss_sum(chi, m);
        cplx b = generalized_gauss_sum_brute(chi, m);
        CHECK(std::abs(a - b) < 1e-9);
      }
    }
  }
}

TEST_CASE("orthogonality inversion") {
  // (1/phi(r)) sum_chi conj(chi)(a) c_chi(m) = e(ma/r) for gcd(a, r) = 1
  for (i64 r = 1; r <= 30; ++r) {
    auto chars = enumerate_characters(r);
    for (i64 a = 1; a <= r; ++a) {
      if (std::gcd(a % r == 0 ? r : a % r, r) != 1) continue;
      for (i64 m = 0; m < r; ++m) {
        cplx acc = 0.0;
        for (auto& chi : chars) acc += chi.conj().eval(a) * generalized_gauss_sum(chi, m);
        acc /= static_cast<double>(euler_phi(r));
        cplx expect = e_of(static_cast<double>((m * (a % r)) % r) / static_cast<double>(r));
        CHECK(std::abs(acc - expect) < 1e-9);
      }
    }
  }
}

TEST_CASE("character order and index round trip") {
  for (i64 n : {8, 9, 15, 16, 40}) {
    auto cs = enumerate_characters(n);
    for (auto& chi : cs) {
      auto again = character_by_index(n, chi.index());
      CHECK(again == chi);
      // order is the true multiplicative order of the value vector
      i64 ord = chi.order();
      for (i64 m = 1; m <= n; ++m) {
        i64 num;
        if (!chi.exponent(m, &num)) continue;
        CHECK((num * 1) % 1 == 0);
        CHECK(num >= 0);
        CHECK(num < ord);
      }
    }
  }
}
