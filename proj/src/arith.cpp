#include "atwist/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace atw {

Factorization factorize(i64 n) {
  if (n <= 0) throw std::domain_error("factorize: n must be positive, got " + std::to_string(n));
  Factorization f;
  f.n = n;
  i64 m = n;
  for (i64 p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
    if (m % p) continue;
    int e = 0;
    while (m % p == 0) { m /= p; ++e; }
    f.factors.push_back({p, e});
  }
  if (m > 1) f.factors.push_back({m, 1});
  return f;
}

int moebius(i64 n) {
  Factorization f = factorize(n);
  for (const auto& pp : f.factors)
    if (pp.e > 1) return 0;
  return (f.factors.size() % 2 == 0) ? 1 : -1;
}

i64 euler_phi(i64 n) {
  i64 r = n;
  for (const auto& pp : factorize(n).factors) r -= r / pp.p;
  return r;
}

double sigma_real(double s, i64 n) {
  double tot = 1.0;
  for (const auto& pp : factorize(n).factors) {
    double term = 1.0, pe = 1.0;
    for (int j = 1; j <= pp.e; ++j) {
      pe *= static_cast<double>(pp.p);
      term += std::pow(pe, s);
    }
    tot *= term;
  }
  return tot;
}

i64 sigma0(i64 n) {
  i64 r = 1;
  for (const auto& pp : factorize(n).factors) r *= pp.e + 1;
  return r;
}

i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }
i64 lcm(i64 a, i64 b) { return a / std::gcd(a, b) * b; }

int ord_p(i64 n, i64 p) {
  int e = 0;
  while (n % p == 0) { n /= p; ++e; }
  return e;
}

i64 radical(i64 n) {
  i64 r = 1;
  for (const auto& pp : factorize(n).factors) r *= pp.p;
  return r;
}

bool is_squarefree(i64 n) { return moebius(n) != 0; }

std::vector<i64> divisors(i64 n) {
  std::vector<i64> ds{1};
  for (const auto& pp : factorize(n).factors) {
    size_t old = ds.size();
    i64 pe = 1;
    for (int j = 1; j <= pp.e; ++j) {
      pe *= pp.p;
      for (size_t i = 0; i < old; ++i) ds.push_back(ds[i] * pe);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

i64 mod_inv(i64 a, i64 m) {
  if (m <= 0) throw std::domain_error("mod_inv: modulus must be positive");
  if (m == 1) return 0;
  i64 a0 = ((a % m) + m) % m;
  // extended Euclid on (a0, m)
  i64 old_r = a0, r = m, old_s = 1, s = 0;
  while (r != 0) {
    i64 qt = old_r / r;
    i64 t;
    t = old_r - qt * r; old_r = r; r = t;
    t = old_s - qt * s; old_s = s; s = t;
  }
  if (old_r != 1)
    throw std::domain_error("mod_inv: gcd(" + std::to_string(a) + ", " + std::to_string(m) +
                            ") = " + std::to_string(old_r) + " > 1");
  return ((old_s % m) + m) % m;
}

i64 mul_mod(i64 a, i64 b, i64 m) {
  return static_cast<i64>((static_cast<__int128>(a) * b) % m);
}

LevelSplit level_split(i64 q, i64 d) {
  if (q < 1 || d < 1) throw std::domain_error("level_split: q, d must be >= 1");
  LevelSplit ls;
  ls.q = q;
  ls.d = d;
  for (const auto& pp : factorize(d).factors) {
    i64 pe = 1;
    for (int j = 0; j < pp.e; ++j) pe *= pp.p;
    if (pp.e >= ord_p(q, pp.p))
      ls.M_d *= pe;
    else
      ls.r_d *= pe;
  }
  for (const auto& pp : factorize(q).factors) {
    bool in_r = (ls.r_d % pp.p == 0);
    bool in_d = (d % pp.p == 0);
    if (in_r || !in_d) {
      i64 pe = 1;
      for (int j = 0; j < pp.e; ++j) pe *= pp.p;
      ls.R_d *= pe;
    }
  }
  ls.R_d_prime = lcm(ls.R_d, ls.r_d * ls.r_d);
  return ls;
}

CrtSplit crt_split(i64 a, const LevelSplit& split) {
  i64 am = ((a % split.d) + split.d) % split.d;
  if (std::gcd(am, split.d) != 1)
    throw std::domain_error("crt_split: gcd(a, d) > 1");
  CrtSplit c;
  if (split.M_d > 1) c.a1 = mul_mod(((a % split.M_d) + split.M_d) % split.M_d, mod_inv(split.r_d, split.M_d), split.M_d);
  if (split.r_d > 1) c.a2 = mul_mod(((a % split.r_d) + split.r_d) % split.r_d, mod_inv(split.M_d, split.r_d), split.r_d);
  return c;
}

}  // namespace atw
