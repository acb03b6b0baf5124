#pragma once

// Dirichlet characters mod n, represented by exponent vectors on fixed
// generators of each (Z/p^e)^x (two-generator convention at p = 2, e >= 3).
// Values are exact root-of-unity exponents, materialized to complex<double>
// only at evaluation, so conductor and primitivity stay exact.
//
// Gauss sums tau(chi) and generalized Gauss sums
//   c_chi(m) = sum_{u mod r} chi(u) e(mu/r)
// are provided with both a closed form and the brute-force double sum as an
// oracle.  With chi induced from the primitive chi_* mod n, r_n the product of
// primes p | r, p !| n, and r_2 = r/(n r_n):  c_chi(m) = 0 unless r_2 | m, and
//   c_chi(r_2 m) = r_2 tau(chi_*) sum_{g | (r_n, m)} g mu(r_n/g) chi_*(r_n/g) conj(chi_*)(m/g).

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "atwist/arith.hpp"

namespace atw {

using cplx = std::complex<double>;

// Structure of (Z/m)^x: local cyclic components with generators and
// discrete-log tables.  Shared immutable data, cached per modulus.
struct UnitGroup {
  i64 modulus = 1;
  // component i: generator gen[i] (lifted mod modulus by CRT), cyclic order ord[i]
  std::vector<i64> gen;
  std::vector<i64> ord;
  // dlog[residue] = exponents of residue on the generators; empty for non-units
  std::vector<std::vector<i64>> dlog;

  static std::shared_ptr<const UnitGroup> get(i64 modulus);
};

class DirichletCharacter {
 public:
  DirichletCharacter();                                    // trivial character mod 1
  DirichletCharacter(i64 modulus, std::vector<i64> exps);  // exps[i] mod group->ord[i]

  i64 modulus() const { return group_->modulus; }
  i64 conductor() const { return conductor_; }
  bool is_primitive() const { return conductor_ == modulus(); }
  bool is_trivial() const;
  i64 order() const { return order_; }
  int parity() const;  // chi(-1) = +-1

  // exact value as a fraction of a full turn: chi(m) = e(exponent(m)/order()),
  // or no value when gcd(m, modulus) > 1
  bool exponent(i64 m, i64* num_out) const;
  cplx eval(i64 m) const;

  DirichletCharacter conj() const;
  DirichletCharacter square() const;
  // the primitive character mod conductor() inducing this one
  DirichletCharacter primitive_part() const;
  // index of this character in the enumeration order of its modulus
  i64 index() const;

  const std::vector<i64>& exponents() const { return exps_; }

  bool operator==(const DirichletCharacter& o) const {
    return modulus() == o.modulus() && exps_ == o.exps_;
  }

 private:
  std::shared_ptr<const UnitGroup> group_;
  std::vector<i64> exps_;
  i64 conductor_ = 1;
  i64 order_ = 1;

  void finish_init();
};

// exactly phi(n) distinct characters, lexicographic in exponent vectors
std::vector<DirichletCharacter> enumerate_characters(i64 n);
DirichletCharacter character_by_index(i64 n, i64 index);

cplx gauss_sum(const DirichletCharacter& chi);                    // tau(chi)
cplx generalized_gauss_sum(const DirichletCharacter& chi, i64 m); // closed form
cplx generalized_gauss_sum_brute(const DirichletCharacter& chi, i64 m);

}  // namespace atw
