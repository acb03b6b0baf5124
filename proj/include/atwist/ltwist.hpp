#pragma once

// Additive twists L(s, f, a/d) and their completions
//   Lambda(s, f, a/d) = int_0^inf f(a/d + iy) y^s dy/y = (2 pi)^{-s} Gamma(s) L(s, f, a/d):
// a direct-quadrature oracle, the weight-2 functional equation, the smoothed
// approximate functional equation, and modular symbols <a/d>^{+-}.
//
// Functional equation (weight 2, trivial nebentypus), with the level-split
// invariants of (q, d), a == a1 r_d + a2 M_d (mod d):
//
//   (M_d^2 R_d')^{s-1} Lambda(s, f, a/d)
//     = -(1/phi(r_d)) sum_{n | r_d, r_d/n squarefree, (n, r_d/n) = 1} mu(r_d/n)
//         sum_{chi mod n primitive}
//           tau(conj chi) chi(a2) conj(chi)(r_d/n) chi(M_d)^2
//           Lambda(2-s, (f^chi)|W_{R_d'}, -inv(R_d' a1, M_d)/M_d),
//
// the contragredient side living at level N_g = R_d' q / R_d.  The smoothed
// approximate functional equation derived from it reads, for every X > 0,
//
//   L(1, f, a/d) = sum_n (a(n) e(na/d)/n) V(M_d sqrt(R_d') X / (2 pi n))
//     - (1/phi(r_d)) sum_{n, chi} [same coefficient] sum_m (b_chi(m) e(-m abar/M_d)/m)
//         V(M_d sqrt(R_d') / ((2 pi)^3 X m)),
//
// with V(y) the exp(u^2)-smoothed kernel from numerics.hpp.

#include <complex>
#include <map>
#include <memory>
#include <vector>

#include "atwist/arith.hpp"
#include "atwist/characters.hpp"
#include "atwist/forms.hpp"
#include "atwist/numerics.hpp"
#include "atwist/twists.hpp"

namespace atw {

struct AdditiveTwist {
  i64 a = 0;   // 0 <= a < d, gcd(a, d) = 1
  i64 d = 1;
  LevelSplit split;
  i64 a1 = 0;  // residue mod M_d
  i64 a2 = 0;  // residue mod r_d
};

AdditiveTwist make_additive_twist(i64 q, i64 a, i64 d);

struct LambdaResult {
  cplx value;
  double err;  // combined truncation + quadrature error estimate
};

// Completed integral by the split
//   sum_{n <= T} c(n) e(na/d) (2 pi n)^{-s} Gamma(s, 2 pi n Y0)
//   + int_0^{Y0} g(a/d + iy) y^{s-1} dy  (adaptive quadrature on the raw
// q-expansion).  Y0 = 0 selects 1/(d sqrt(level)).
LambdaResult lambda_additive_twist(const ModularSeries& g, cplx s, i64 a, i64 d, double eps,
                                   double Y0 = 0.0);

// the oracle: pure q-expansion route on f
LambdaResult lambda_direct(const CoefficientSeries& f, cplx s, const AdditiveTwist& tw,
                           double eps);

// Cache of contragredient series (f^chi)|W_{R'} keyed by (chi, R', N_g).
// For the trivial character at N_g = level(f) the flipped form is the exact
// lambda_{R'} a(n) (pseudo-eigenvalue route); everything else is numeric AL.
class ContragredientProvider {
 public:
  explicit ContragredientProvider(const CoefficientSeries& f);

  const ContragredientSeries& get(const DirichletCharacter& chi, i64 R_prime, i64 N_g,
                                  i64 min_length);
  const CoefficientSeries& form() const { return f_; }

 private:
  const CoefficientSeries& f_;
  struct Key {
    i64 chi_mod, chi_idx, R_prime, N_g;
    bool operator<(const Key& o) const {
      return std::tie(chi_mod, chi_idx, R_prime, N_g) <
             std::tie(o.chi_mod, o.chi_idx, o.R_prime, o.N_g);
    }
  };
  std::map<Key, ContragredientSeries> cache_;
  std::map<i64, cplx> fricke_;  // R -> lambda_R for the trivial-character shortcut

  ContragredientSeries build(const DirichletCharacter& chi, i64 R_prime, i64 N_g, i64 len);
};

// admissible character moduli in the FE sum: n | r_d with r_d/n squarefree and
// gcd(n, r_d/n) = 1
std::vector<i64> fe_character_moduli(i64 r_d);

// right side of the functional equation, normalized like (M_d^2 R_d')^{s-1} Lambda(s)
LambdaResult functional_equation_rhs(const CoefficientSeries& f, cplx s, const AdditiveTwist& tw,
                                     ContragredientProvider& provider, double eps);

enum class SumQuality {
  strict,   // truncation by the certified sigma_0-mass bound (long sums)
  survey,   // V-threshold cut at max(1e-9, eps/10); err still reports the
            // certified mass bound, which may exceed eps
};

struct AfeOptions {
  double X = 1.0;
  double eps = 1e-8;
  SumQuality quality = SumQuality::survey;
};

// L(1, f, a/d) by the smoothed approximate functional equation
LambdaResult approx_L1(const CoefficientSeries& f, const AdditiveTwist& tw,
                       ContragredientProvider& provider, const AfeOptions& opts = {});

struct ModularSymbolPair {
  double plus;  // real part of <a/d>^+
  cplx minus;   // purely imaginary
  i64 a = 0, d = 1;
};

// <a/d>^{+-} = (L(1,f,a/d) +- L(1,f,-a/d)) / 2 through approx_L1
ModularSymbolPair modular_symbol(const CoefficientSeries& f, i64 a, i64 d,
                                 ContragredientProvider& provider, const AfeOptions& opts = {});

struct ModsymBoundRow {
  i64 d;
  double max_lambda;   // max over coprime a of |Lambda(1, f, a/d)|
  double bound_shape;  // d^{1/2} q^{1/4} prod_{p | d, ord_p(d) < ord_p(q)} p^{1/4}
  double ratio;
};

std::vector<ModsymBoundRow> modsym_bound_report(const CoefficientSeries& f, i64 d_max,
                                                ContragredientProvider& provider,
                                                const AfeOptions& opts = {});

}  // namespace atw
