#pragma once

// Exact elementary number theory: factorization, multiplicative functions,
// modular inverses, CRT, and the level-splitting invariants (M_d, r_d, R_d, R_d')
// attached to a level q and a denominator d.  Everything here is 64-bit and
// exact; desk-scale parameters (q <= 10^3, d <= 10^4) keep lcm(q, d^2) well
// inside int64 range.

#include <cstdint>
#include <vector>

namespace atw {

using i64 = std::int64_t;

struct PrimePower {
  i64 p;
  int e;
  bool operator==(const PrimePower&) const = default;
};

struct Factorization {
  i64 n = 1;
  std::vector<PrimePower> factors;  // primes strictly increasing, e >= 1
};

Factorization factorize(i64 n);            // n >= 1, throws std::domain_error on n <= 0
int moebius(i64 n);                        // mu(n) in {-1,0,1}
i64 euler_phi(i64 n);                      // phi(n)
double sigma_real(double s, i64 n);        // sum_{l | n} l^s
i64 sigma0(i64 n);                         // divisor count
i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);
int ord_p(i64 n, i64 p);                   // exponent of p in n
i64 radical(i64 n);                        // product of distinct primes
bool is_squarefree(i64 n);
std::vector<i64> divisors(i64 n);          // ascending

// x in [0, m) with a*x == 1 (mod m); throws std::domain_error if gcd(a,m) > 1.
i64 mod_inv(i64 a, i64 m);
// a*b mod m without overflow for |inputs| < 2^62.
i64 mul_mod(i64 a, i64 b, i64 m);

// Invariants attached to (q, d) per the weight-2 functional-equation setup:
//   d = M_d * r_d with gcd(M_d, r_d) = 1,
//   M_d carries the primes where ord_p(d) >= ord_p(q),
//   r_d the primes where ord_p(d) < ord_p(q),
//   R_d = prod_{p | gcd(q, r_d)} p^ord_p(q) * prod_{p | q, p !| d} p^ord_p(q),
//   R_d' = lcm(R_d, r_d^2),  and  M_d^2 R_d' = lcm(q, d^2).
struct LevelSplit {
  i64 q = 1, d = 1;
  i64 M_d = 1, r_d = 1, R_d = 1, R_d_prime = 1;
};

LevelSplit level_split(i64 q, i64 d);

struct CrtSplit {
  i64 a1 = 0;  // residue mod M_d, coprime to M_d
  i64 a2 = 0;  // residue mod r_d, coprime to r_d
};

// a == a1*r_d + a2*M_d (mod d); requires gcd(a, d) = 1.
CrtSplit crt_split(i64 a, const LevelSplit& split);

}  // namespace atw
