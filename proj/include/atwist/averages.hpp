#pragma once

// The smoothing family h_delta, its Fourier coefficients, the modular-symbol
// averages G_M^{+-}(x) and A_h^{+-}(M), the limit series of the convergence
// theorem, the delta_M schedule, and the end-to-end convergence experiment.
//
//   h_delta = 1_[-delta, x+delta] * phi_delta,   phi_delta = delta^{-1} phi(./delta),
//   phi(t) = c exp(-1/(1-16 t^2)) on (-1/4, 1/4) with unit integral,
//   hat h_delta(n) = [(e(n delta) - e(-n(x+delta)))/(2 pi i n)] * hat phi(n delta),
//   G_M^{+-}(x) = (1/M) sum_{0 <= a <= Mx} <a/M>^{+-},
//   (1/2) A_h^{+-}(M) = (1/M) sum_{0 <= a <= M} <a/M>^{+-} h(a/M)
//                     = (1/2) sum_n hat h(n) (alpha_{-n,M}(1) +- alpha_{n,M}(1)).

#include <map>
#include <vector>

#include "atwist/ltwist.hpp"

namespace atw {

class BumpFamily {
 public:
  BumpFamily(double x, double delta);

  double x() const { return x_; }
  double delta() const { return delta_; }

  double h(double t) const;        // h_delta(t), t taken mod 1
  cplx h_hat(i64 n) const;         // closed form; n = 0 gives x + 2 delta
  double phi_hat(double w) const;  // int phi(t) e(-w t) dt (real, even)

  static double phi(double t);     // the normalized bump

 private:
  double x_, delta_;
  mutable std::map<i64, double> phi_hat_cache_;
};

// Shared evaluation context: the form, its contragredient cache, the
// L(1, f, a/d)-value cache, and the AFE quality settings.
class AveragesEngine {
 public:
  AveragesEngine(const CoefficientSeries& f, AfeOptions opts = {});

  const CoefficientSeries& form() const { return f_; }
  ContragredientProvider& provider() { return provider_; }
  const AfeOptions& options() const { return opts_; }
  void set_options(const AfeOptions& o) { opts_ = o; }

  // L(1, f, a/d) cached per reduced fraction
  cplx L1(i64 a, i64 d);
  ModularSymbolPair symbol(i64 a, i64 d);  // from the L1 cache

 private:
  const CoefficientSeries& f_;
  ContragredientProvider provider_;
  AfeOptions opts_;
  std::map<std::pair<i64, i64>, cplx> l1_cache_;
};

struct PlusMinus {
  double plus;  // real
  cplx minus;   // purely imaginary
};

// (1/M) sum_{0 <= a <= Mx} <a/M>^{+-}
PlusMinus G_M_direct(AveragesEngine& eng, double x, i64 M);

// alpha_{n, M}(1) = (1/M) sum_{a mod M} e(-n a/M) L(1, f, a/M); periodic in n mod M
cplx alpha(AveragesEngine& eng, i64 n, i64 M);
// all residues at once: alpha_table[rho] = alpha_{rho, M}(1)
std::vector<cplx> alpha_table(AveragesEngine& eng, i64 M);

// A_h^{+-}(M) = sum_{n in Z} hat h(n) (alpha_{-n,M} +- alpha_{n,M}), truncated
// where the hat-h decay certifies the tail; returns (A^+, A^-)
struct AhResult {
  cplx plus;
  cplx minus;
  double tail_err;
  i64 n_cut;
};
AhResult A_h_pm(AveragesEngine& eng, const BumpFamily& family, i64 M);

// partial sums of the limit series with a crude certified tail bound and the
// measured half-length self-difference
struct LimitSeries {
  double plus;        // (1/2pi) sum a(n) sin(2 pi n x)/n^2
  cplx minus;         // (1/2pi i) sum a(n)(cos(2 pi n x) - 1)/n^2
  double tail_bound;  // from |a(n)| <= sigma_0(n) sqrt(n)
  double half_diff;   // |S(N) - S(N/2)| measured (both components, max)
};
LimitSeries limit_series(const CoefficientSeries& f, double x, i64 N);

// delta_M = M^{-3/4} prod_{p | gcd(q, M), p^2 | q} p^{1/4}, clamped into
// (M^{-7/8}, 1)
double delta_schedule(i64 M, i64 q);

struct ConvergenceRow {
  i64 M;
  double delta_M;
  double G_plus;
  cplx G_minus;
  double limit_plus;
  cplx limit_minus;
  double err_plus;
  double err_minus;
  double predicted_scale;  // M^{-1/4} q^{1/4} prod_{p | gcd(q,M), p^2 | q} p^{1/2}
};

std::vector<ConvergenceRow> convergence_experiment(AveragesEngine& eng, double x,
                                                   const std::vector<i64>& M_list,
                                                   i64 limit_N = 2000000);

}  // namespace atw
