#pragma once

// Multiplicative twists f^chi, Atkin-Lehner matrices W_R and their numerical
// application to q-expansions, pseudo-eigenvalues, and the twist-decomposition
// invariants (r_*0, Q_*, beta).
//
// Numeric AL recovery: G = g|W_R is sampled on a horizontal line Im z = y0 and
// its coefficients b(m) are recovered by discrete Fourier inversion with the
// e^{2 pi m y0} unfolding factor.  Each transformed point W_R(z_j) is evaluated
// through the q-expansion after a Gamma_0(level)-pullback using the series'
// known level and nebentypus, so sample heights never degrade.

#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "atwist/arith.hpp"
#include "atwist/characters.hpp"
#include "atwist/forms.hpp"

namespace atw {

// A q-expansion sum c(n) e^{2 pi i n z} known to be modular of the given level
// and nebentypus (weight k).  kappa bounds |c(n)| / (sigma_0(n) n^{(k-1)/2}).
struct ModularSeries {
  std::vector<cplx> c;  // index 0 unused
  i64 level = 1;
  i64 weight = 2;
  DirichletCharacter neben;  // defaults to trivial mod 1
  double kappa = 1.0;
  double coeff_noise = 0.0;     // scalar per-coefficient uncertainty, or
  std::vector<double> cerr;     // per-coefficient uncertainties (overrides)

  i64 length() const { return static_cast<i64>(c.size()) - 1; }
  double noise_at(i64 n) const {
    return cerr.empty() ? coeff_noise : cerr[static_cast<size_t>(n)];
  }
};

ModularSeries to_modular_series(const CoefficientSeries& f);
// coefficient n of f^chi is a(n) chi(n); level [q, cond l, cond^2] with l = cond(chi),
// nebentypus chi^2
ModularSeries twist_coeffs(const CoefficientSeries& f, const DirichletCharacter& chi, i64 N);

// g(z) with certified tail, evaluated after Gamma_0(level)-pullback
struct PointValue {
  cplx value;
  double err;  // certified series tail at the pulled-back point
};
PointValue evaluate_with_pullback(const ModularSeries& g, cplx z);

struct AtkinLehnerMatrix {
  i64 level = 1;  // q
  i64 R = 1;
  // entries (R x1, x2; q x3, R x4), det = R, x1 == 1 (mod q/R), x2 == 1 (mod R)
  i64 x1 = 1, x2 = 0, x3 = 0, x4 = 1;

  i64 a() const { return R * x1; }
  i64 b() const { return x2; }
  i64 c() const { return level * x3; }
  i64 d() const { return R * x4; }
  cplx apply(cplx z) const;
};

// deterministic canonical construction; throws std::domain_error unless
// R | q with gcd(R, q/R) = 1
AtkinLehnerMatrix atkin_lehner_matrix(i64 q, i64 R);

struct ContragredientSeries {
  std::vector<cplx> b;      // index 0 unused
  std::vector<double> err;  // certified per-coefficient error estimates
  enum class Source { numericAL, decomposition } source = Source::numericAL;
  i64 level_out = 1;                 // level of g|W_R (same Gamma_0(level))
  i64 support_modulus = 1;           // Q_*: b(m) = 0 for Q_* !| m (decomposition source)
  DirichletCharacter chi;            // the twisting character
  DirichletCharacter neben_out;      // nebentypus of g|W_R
  double kappa = 1.0;                // measured |b(m)|/(sigma_0 sqrt m) bound (x2 safety)

  i64 length() const { return static_cast<i64>(b.size()) - 1; }
  ModularSeries as_series() const;
};

struct ALOptions {
  double y0 = 0.0;          // 0: automatic min(1/sqrt(level), log(1e3)/(2 pi M_out))
  double target_err = 1e-9; // per-coefficient absolute target
  int max_retries = 2;      // halve y0 on precision failure
};

ContragredientSeries apply_atkin_lehner_numeric(const ModularSeries& g, i64 R, i64 M_out,
                                                const ALOptions& opts = {});

// first output coefficient of F|W_R for a normalized newform F; |lambda| = 1
cplx pseudo_eigenvalue(const CoefficientSeries& F, i64 q_F, i64 R);

// ambient Atkin-Lehner context for Q_*: R | q exact with r_* | R, R' = [R, r^2]
struct DecompositionContext {
  i64 q = 1;
  i64 R = 1;
  i64 R_prime = 1;
};

struct TwistDecomposition {
  i64 F_level = 1;                      // q'
  CoefficientSeries F_coeffs;           // external newform data (a_chi)
  std::map<i64, cplx> beta;             // on divisors of r_star0
  i64 r_star0 = 1;
  i64 Q_star = 1;
  i64 R_star = 1, R_star_prime = 1;
  i64 R = 1, R_prime = 1;               // ambient context
  i64 R_op = 1;                         // R R_*'/R_*, the operator divisor on q'
  cplx lambda = 1.0;                    // pseudo-eigenvalue of F at R_op
  DirichletCharacter chi;
  i64 q = 1;                            // level of f
};

// Decompose f^chi through the externally supplied newform F_data (level q',
// nebentypus chi^2); verifies the reconstruction identity
//   a(n) chi(n) = sum_{l | r_star0, l | n} beta(l) a_chi(n/l)
// for all n <= min length and throws std::runtime_error naming the first
// failing n otherwise.  ctx defaults to the r_*-primary choice R = R_*.
TwistDecomposition twist_decomposition(const CoefficientSeries& f, const DirichletCharacter& chi,
                                       const CoefficientSeries& F_data,
                                       std::optional<DecompositionContext> ctx = std::nullopt);

// b-series predicted by the decomposition (exact route, supported on Q_* | m)
ContragredientSeries contragredient_from_decomposition(const TwistDecomposition& dec, i64 M_out);

// finite-sample report for the normalized coefficient bound: rows of
// (m, |(Q m)^{-1/2} b(Q m)| / [(m/r0)^eps (Q r0)^{1/2} sigma_{-1+2eps}(r0)])
struct FourierBoundRow {
  i64 m;
  double normalized;
  double ratio;
};
std::vector<FourierBoundRow> fourier_bound_report(const ContragredientSeries& cs, i64 r_star0,
                                                  double eps = 0.1);

}  // namespace atw
