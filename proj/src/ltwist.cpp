#include "atwist/ltwist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace atw {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;

std::vector<cplx> phase_table(i64 a, i64 d) {
  // e(a j / d) for j = 0..d-1
  std::vector<cplx> t(d);
  i64 aa = ((a % d) + d) % d;
  for (i64 j = 0; j < d; ++j) {
    double th = kTwoPi * static_cast<double>((aa * j) % d) / static_cast<double>(d);
    t[j] = {std::cos(th), std::sin(th)};
  }
  return t;
}

// |Gamma(s, x)| <= 2 x^{Re s - 1} e^{-x} once x >= 2|s| + 6
double upper_gamma_abs_bound(cplx s, double x) {
  return 2.0 * std::exp((s.real() - 1.0) * std::log(x) - x);
}

// rigorous bound on sum_{n > T} sigma_0(n) n^{-1/2} V(c/n) (the normalized
// per-term mass of weight-2 AFE tails), by dyadic blocks with
//   sum_{N1 < n <= 2 N1} sigma_0(n) n^{-1/2} <= sqrt(N1) (ln N1 + 4.4)
double v_tail_mass(double c_arg, i64 T, const VTable& V) {
  double tail = 0.0;
  double n0 = static_cast<double>(std::max<i64>(T, 1));
  for (int j = 0; j < 200; ++j) {
    double v = V(c_arg / n0);
    tail += std::sqrt(n0) * (std::log(n0) + 4.4) * v;
    if (v < 1e-22) break;
    n0 *= 2.0;
  }
  return tail;
}

}  // namespace

AdditiveTwist make_additive_twist(i64 q, i64 a, i64 d) {
  if (d < 1) throw std::domain_error("make_additive_twist: d must be >= 1");
  AdditiveTwist tw;
  tw.d = d;
  tw.a = ((a % d) + d) % d;
  if (d > 1 && std::gcd(tw.a, d) != 1)
    throw std::domain_error("make_additive_twist: gcd(a, d) > 1");
  tw.split = level_split(q, d);
  auto c = crt_split(tw.a, tw.split);
  tw.a1 = c.a1;
  tw.a2 = c.a2;
  return tw;
}

// ---------------------------------------------------------------------------
// completed Lambda via incomplete-Gamma upper sum + lower quadrature
// ---------------------------------------------------------------------------

namespace {

// int_0^{Y0} g(a/d + iy) y^{s-1} dy = Y0^s int_0^inf g(a/d + i Y0 e^{-t}) e^{-st} dt
template <typename Eval>
LambdaResult lower_integral(cplx s, double Y0, double eps, Eval&& eval_at) {
  cplx y0s = std::exp(s * std::log(Y0));
  double stop = eps / (16.0 * std::abs(y0s));
  cplx acc = 0.0;
  double err = 0.0;
  for (int panel = 0;; ++panel) {
    if (panel == 90)
      throw std::runtime_error("lower_integral: no decay after 90 panels (precision unreachable)");
    double t0 = static_cast<double>(panel), t1 = t0 + 1.0;
    double qerr = 0.0;
    cplx val = adaptive_simpson(
        [&](double t) { return eval_at(t) * std::exp(-s * t); }, t0, t1, stop / 8.0, 24, &qerr);
    acc += val;
    err += qerr;
    double end_mag = std::abs(eval_at(t1) * std::exp(-s * t1));
    if (std::abs(val) < stop && end_mag < stop / 2.0) {
      // integrand decays doubly exponentially past the last panel
      err += 2.0 * (std::abs(val) + end_mag);
      break;
    }
  }
  return {y0s * acc, std::abs(y0s) * err};
}

}  // namespace

// upper incomplete-Gamma sum U_g(s, Y0) = sum_n c(n) e(na/d) (2 pi n)^{-s} Gamma(s, 2 pi n Y0),
// the integral of g(a/d + iy) y^{s-1} over (Y0, inf)
namespace {
struct UpperSum {
  cplx value;
  double err;
  i64 terms;
};

template <typename CoefFn, typename ErrFn>
UpperSum upper_gamma_sum(CoefFn&& coeff, ErrFn&& coeff_err, i64 N, double kappa, i64 weight,
                         cplx s, i64 a, i64 d, double Y0, double eps) {
  const double sig = s.real();
  auto omega = phase_table(a, d);
  UpperSum out{0.0, 0.0, 0};
  const double x_safe = 2.0 * std::abs(s) + 6.0;
  for (i64 n = 1;; ++n) {
    double x = kTwoPi * static_cast<double>(n) * Y0;
    if (x > x_safe) {
      // residual: |Gamma(s,x)| <= 2 x^{sig-1} e^{-x}, so the term is at most
      // 2 kappa sigma_0(n) n^{(k-1)/2} (2 pi n)^{-1} Y0^{sig-1} e^{-2 pi n Y0}
      double pref = (2.0 / kPi) * kappa * std::exp((sig - 1.0) * std::log(Y0));
      double rest = power_tail_bound(n - 1, Y0, static_cast<double>(weight) / 2.0 - 1.0);
      if (pref * rest < eps / 8.0) {
        out.err += pref * rest;
        out.terms = n - 1;
        break;
      }
    }
    if (n > N)
      throw TruncationError("upper_gamma_sum: series too short", n + n / 4);
    cplx w = std::exp(-s * std::log(kTwoPi * static_cast<double>(n)));
    out.value += coeff(n) * omega[n % d] * w * upper_gamma(s, x);
    double noise = coeff_err(n);
    if (noise > 0)
      out.err += noise * std::abs(w) * std::abs(upper_gamma(cplx(sig, 0.0), x));
  }
  return out;
}
}  // namespace

LambdaResult lambda_additive_twist(const ModularSeries& g, cplx s, i64 a, i64 d, double eps,
                                   double Y0) {
  if (d < 1) throw std::domain_error("lambda_additive_twist: d >= 1");
  a = ((a % d) + d) % d;
  if (Y0 <= 0) Y0 = 1.0 / (static_cast<double>(d) * std::sqrt(static_cast<double>(g.level)));
  const double sig = s.real();
  const i64 N = g.length();

  UpperSum upper = upper_gamma_sum([&](i64 n) { return g.c[n]; },
                                   [&](i64 n) { return g.noise_at(n); }, N, g.kappa, g.weight,
                                   s, a, d, Y0, eps);

  // lower part by quadrature on the raw q-expansion
  double y0sig = std::exp(sig * std::log(Y0));
  double eval_eps = eps * std::max(0.25, sig) / (40.0 * y0sig);
  double eval_err_acc = 0.0;
  auto eval_at = [&](double t) -> cplx {
    double y = Y0 * std::exp(-t);
    cplx z(static_cast<double>(a) / static_cast<double>(d), y);
    i64 need = series_length_for(y, eval_eps / std::max(1.0, g.kappa), g.weight);
    if (need > N) {
      double reachable = g.kappa * series_tail_bound(N, y, g.weight);
      if (reachable > eval_eps)
        throw TruncationError("lambda_additive_twist: stored coefficients cannot certify the "
                              "requested precision at height " + std::to_string(y),
                              need);
      need = N;
    }
    const cplx two_pi_i_z = cplx(0.0, kTwoPi) * z;
    cplx w = std::exp(two_pi_i_z), wn = 1.0, tot = 0.0;
    double noise = 0.0;
    const bool per_coeff = !g.cerr.empty();
    for (i64 n = 1; n <= need; ++n) {
      if (n % 64 == 1) wn = std::exp(two_pi_i_z * static_cast<double>(n - 1));
      wn *= w;
      tot += g.c[n] * wn;
      if (per_coeff) noise += g.cerr[static_cast<size_t>(n)] * std::abs(wn);
      if (std::abs(wn) < 1e-320) break;
    }
    double rho = std::exp(-kTwoPi * y);
    if (!per_coeff) noise = g.coeff_noise * rho / (1.0 - rho);
    eval_err_acc =
        std::max(eval_err_acc, g.kappa * series_tail_bound(need, y, g.weight) + noise);
    return tot;
  };
  LambdaResult low = lower_integral(s, Y0, eps, eval_at);

  double err = upper.err + low.err + eval_err_acc * y0sig / std::max(0.25, sig);
  return {upper.value + low.value, err};
}

LambdaResult lambda_direct(const CoefficientSeries& f, cplx s, const AdditiveTwist& tw,
                           double eps) {
  ModularSeries g;
  g.level = f.level;
  g.weight = f.weight;
  g.kappa = 1.0;
  g.c.assign(f.length() + 1, 0.0);
  for (i64 n = 1; n <= f.length(); ++n) g.c[n] = f.a(n);
  return lambda_additive_twist(g, s, tw.a, tw.d, eps, 0.0);
}

// ---------------------------------------------------------------------------
// contragredient provider
// ---------------------------------------------------------------------------

ContragredientProvider::ContragredientProvider(const CoefficientSeries& f) : f_(f) {}

ContragredientSeries ContragredientProvider::build(const DirichletCharacter& chi, i64 R_prime,
                                                   i64 N_g, i64 len) {
  if (chi.is_trivial() && N_g == f_.level) {
    // f|W_{R'} = lambda_{R'} f exactly (trivial-nebentypus newform)
    auto it = fricke_.find(R_prime);
    cplx lam;
    if (it != fricke_.end()) {
      lam = it->second;
    } else {
      lam = (R_prime == 1) ? cplx(1.0, 0.0) : pseudo_eigenvalue(f_, f_.level, R_prime);
      if (std::abs(lam - 1.0) < 1e-4) lam = 1.0;
      if (std::abs(lam + 1.0) < 1e-4) lam = -1.0;
      fricke_[R_prime] = lam;
    }
    if (len > f_.length())
      throw TruncationError("ContragredientProvider: base series too short", len);
    ContragredientSeries cs;
    cs.source = ContragredientSeries::Source::numericAL;
    cs.level_out = N_g;
    cs.chi = chi;
    cs.neben_out = DirichletCharacter();
    cs.b.assign(len + 1, 0.0);
    cs.err.assign(len + 1, 0.0);
    for (i64 n = 1; n <= len; ++n) cs.b[n] = lam * f_.a(n);
    cs.kappa = 1.0;
    return cs;
  }
  i64 twist_len = std::min<i64>(f_.length(), std::max<i64>(4 * len, 20 * N_g + 1000));
  for (;;) {
    ModularSeries t = twist_coeffs(f_, chi, twist_len);
    t.level = N_g;  // a form of level dividing N_g, viewed at the operator level
    try {
      ContragredientSeries cs = apply_atkin_lehner_numeric(t, R_prime, len, {.target_err = 1e-9});
      cs.chi = chi;
      return cs;
    } catch (const TruncationError& e) {
      if (e.required_n > f_.length()) throw;
      twist_len = std::min<i64>(f_.length(), e.required_n + e.required_n / 8);
    }
  }
}

const ContragredientSeries& ContragredientProvider::get(const DirichletCharacter& chi,
                                                        i64 R_prime, i64 N_g, i64 min_length) {
  Key k{chi.modulus(), chi.index(), R_prime, N_g};
  auto it = cache_.find(k);
  if (it != cache_.end() && it->second.length() >= min_length) return it->second;
  i64 len = std::max<i64>(min_length + min_length / 4 + 64,
                          it == cache_.end() ? 0 : 2 * it->second.length());
  cache_[k] = build(chi, R_prime, N_g, len);
  return cache_.at(k);
}

std::vector<i64> fe_character_moduli(i64 r_d) {
  std::vector<i64> out;
  for (i64 n : divisors(r_d)) {
    i64 cof = r_d / n;
    if (is_squarefree(cof) && std::gcd(n, cof) == 1) out.push_back(n);
  }
  return out;
}

namespace {

struct FeTerm {
  DirichletCharacter chi;
  cplx coef;  // mu(r/n) tau(conj chi) chi(a2) conj(chi)(r/n) chi(M)^2
};

std::vector<FeTerm> fe_terms(const AdditiveTwist& tw) {
  std::vector<FeTerm> terms;
  const i64 r = tw.split.r_d, M = tw.split.M_d;
  for (i64 n : fe_character_moduli(r)) {
    double mu = static_cast<double>(moebius(r / n));
    for (auto& chi : enumerate_characters(n)) {
      if (!chi.is_primitive()) continue;
      cplx chiM = chi.eval(M);
      cplx coef = mu * gauss_sum(chi.conj()) * chi.eval(tw.a2) * chi.conj().eval(r / n) *
                  chiM * chiM;
      terms.push_back({chi, coef});
    }
  }
  return terms;
}

// numerator of the dual additive twist: -inv(R' a1) mod M
i64 dual_twist_numerator(const AdditiveTwist& tw) {
  const i64 M = tw.split.M_d;
  if (M == 1) return 0;
  i64 x = mod_inv(mul_mod(tw.split.R_d_prime % M, tw.a1 % M, M), M);
  return (M - x) % M;
}

}  // namespace

LambdaResult functional_equation_rhs(const CoefficientSeries& f, cplx s, const AdditiveTwist& tw,
                                     ContragredientProvider& provider, double eps) {
  // The right side -(1/phi(r)) sum_chi C_chi Lambda(2-s, G_chi, -abar/M) is
  // evaluated through the exact two-sided split: with U the incomplete-Gamma
  // upper sum and Yhat = 1/(M^2 R' Y1), the pointwise flip gives
  //   Lambda(2-s, G_chi, .) = U_{G_chi}(2-s, Yhat) + [flip of the f-side upper part],
  // so that, assembled over chi,
  //   rhs = (M^2 R')^{s-1} U_f(s, Y1) - (1/phi(r)) sum_chi C_chi U_{G_chi}(2-s, Yhat).
  // No quadrature or cusp-side evaluation is needed, and the split height Y1
  // is deliberately distinct from the oracle's.
  const i64 M = tw.split.M_d, r = tw.split.r_d;
  const i64 R = tw.split.R_d, R_prime = tw.split.R_d_prime;
  const i64 N_g = R_prime * (f.level / R);
  const i64 c_dual = dual_twist_numerator(tw);
  const double norm = static_cast<double>(M) * static_cast<double>(M) *
                      static_cast<double>(R_prime);
  auto terms = fe_terms(tw);
  double coef_mass = 0.0;
  for (auto& t : terms) coef_mass += std::abs(t.coef);
  double eps_term = eps * static_cast<double>(euler_phi(r)) / (2.0 * std::max(1.0, coef_mass));

  const double Y1 = 0.71 / (static_cast<double>(tw.d) *
                            std::sqrt(static_cast<double>(f.level)));
  const double Yhat = 1.0 / (norm * Y1);
  cplx w = 2.0 - s;

  UpperSum uf = upper_gamma_sum([&](i64 n) { return cplx(f.a(n), 0.0); },
                                [](i64) { return 0.0; }, f.length(), 1.0, f.weight, s, tw.a,
                                tw.d, Y1, eps / 2.0);
  cplx acc = std::exp((s - 1.0) * std::log(norm)) * uf.value;
  double err = std::exp((s.real() - 1.0) * std::log(norm)) * uf.err;

  i64 min_len = static_cast<i64>((2.0 * std::abs(w) + 46.0) / (kTwoPi * Yhat)) + 8;
  for (auto& t : terms) {
    const ContragredientSeries* G = &provider.get(t.chi, R_prime, N_g, min_len);
    for (int retry = 0;; ++retry) {
      try {
        UpperSum ug = upper_gamma_sum([&](i64 m) { return G->b[m]; },
                                      [&](i64 m) { return G->err[static_cast<size_t>(m)]; },
                                      G->length(), G->kappa, 2, w, c_dual, M, Yhat, eps_term);
        acc -= t.coef * ug.value / static_cast<double>(euler_phi(r));
        err += std::abs(t.coef) * ug.err / static_cast<double>(euler_phi(r));
        break;
      } catch (const TruncationError& e) {
        if (retry == 4) throw;
        G = &provider.get(t.chi, R_prime, N_g, e.required_n);
      }
    }
  }
  return {acc, err};
}

// ---------------------------------------------------------------------------
// approximate functional equation
// ---------------------------------------------------------------------------

namespace {

struct VSum {
  cplx value = 0.0;
  double err = 0.0;
  i64 terms = 0;
};

// sum_n (coeff(n) e(n a / d)/n) V(c/n); truncation by the certified
// sigma_0-mass block bound (strict) or a V-threshold cut (survey)
template <typename CoefFn>
VSum afe_weighted_sum(CoefFn&& coeff, i64 N, double kappa, i64 a, i64 d, double c_arg,
                      double eps, SumQuality quality, double per_coeff_err) {
  const VTable& V = VTable::instance();
  auto omega = phase_table(a, d);
  VSum out;
  KahanSum acc_re, acc_im;
  const double tau_survey = std::max(1e-9, eps * 0.1);
  i64 n = 1;
  for (;; ++n) {
    double v = (n <= N) ? V(c_arg / static_cast<double>(n)) : 0.0;
    if (n > N) {
      double rem = kappa * v_tail_mass(c_arg, n - 1, V);
      if (quality == SumQuality::strict && rem > eps / 4.0)
        throw TruncationError("AFE sum: coefficient series too short",
                              static_cast<i64>(static_cast<double>(n) * 2));
      out.err += rem;
      break;
    }
    if ((n & 2047) == 0 || v < tau_survey) {
      bool want_stop = (quality == SumQuality::survey && v < tau_survey);
      double rem = kappa * v_tail_mass(c_arg, n, V);
      if ((quality == SumQuality::strict && rem <= eps / 4.0) || want_stop) {
        out.err += rem;
        break;
      }
    }
    cplx term = coeff(n) / static_cast<double>(n) * omega[n % d] * v;
    acc_re.add(term.real());
    acc_im.add(term.imag());
    if (per_coeff_err > 0) out.err += per_coeff_err / static_cast<double>(n) * v;
  }
  out.terms = n;
  out.value = {acc_re.s, acc_im.s};
  return out;
}

}  // namespace

LambdaResult approx_L1(const CoefficientSeries& f, const AdditiveTwist& tw,
                       ContragredientProvider& provider, const AfeOptions& opts) {
  const i64 r = tw.split.r_d;
  const i64 R = tw.split.R_d, R_prime = tw.split.R_d_prime;
  const i64 M = tw.split.M_d;
  const i64 N_g = R_prime * (f.level / R);
  const double MsqR = static_cast<double>(M) * std::sqrt(static_cast<double>(R_prime));
  const double c1 = MsqR * opts.X / kTwoPi;
  const double c2 = MsqR / (kTwoPi * kTwoPi * kTwoPi * opts.X);
  const i64 c_dual = dual_twist_numerator(tw);
  const VTable& V = VTable::instance();

  VSum main = afe_weighted_sum([&](i64 n) { return cplx(f.a(n), 0.0); }, f.length(), 1.0,
                               tw.a, tw.d, c1, opts.eps, opts.quality, 0.0);

  auto terms = fe_terms(tw);
  cplx dual_acc = 0.0;
  double dual_err = 0.0;
  for (auto& t : terms) {
    double per_eps = opts.eps / (2.0 * std::max<double>(1.0, static_cast<double>(terms.size())) *
                                 std::max(1.0, std::abs(t.coef)));
    // initial length guess: survey cuts at the V threshold, strict at the
    // kappa = 2 mass bound
    i64 guess;
    if (opts.quality == SumQuality::survey) {
      double tau = std::max(1e-9, per_eps * 0.1);
      guess = static_cast<i64>(c2 / V.y_for_threshold(tau)) + 64;
    } else {
      guess = 256;
      while (2.0 * v_tail_mass(c2, guess, V) > per_eps && guess < (i64(1) << 26)) guess *= 2;
    }
    const ContragredientSeries* G = &provider.get(t.chi, R_prime, N_g, guess);
    for (int retry = 0;; ++retry) {
      try {
        VSum ds = afe_weighted_sum([&](i64 m) { return G->b[m]; }, G->length(), G->kappa,
                                   c_dual, M, c2, per_eps, opts.quality,
                                   G->err.empty() ? 0.0 : G->err.back());
        dual_acc += t.coef * ds.value;
        dual_err += std::abs(t.coef) * ds.err;
        break;
      } catch (const TruncationError& e) {
        if (retry == 5) throw;
        G = &provider.get(t.chi, R_prime, N_g, e.required_n);
      }
    }
  }
  double phi_r = static_cast<double>(euler_phi(r));
  cplx value = main.value - dual_acc / phi_r;
  return {value, main.err + dual_err / phi_r};
}

ModularSymbolPair modular_symbol(const CoefficientSeries& f, i64 a, i64 d,
                                 ContragredientProvider& provider, const AfeOptions& opts) {
  AdditiveTwist plus_tw = make_additive_twist(f.level, a, d);
  AdditiveTwist minus_tw = make_additive_twist(f.level, -a, d);
  LambdaResult La = approx_L1(f, plus_tw, provider, opts);
  LambdaResult Lb = approx_L1(f, minus_tw, provider, opts);
  ModularSymbolPair out;
  out.a = plus_tw.a;
  out.d = d;
  out.plus = (0.5 * (La.value + Lb.value)).real();
  out.minus = 0.5 * (La.value - Lb.value);
  return out;
}

std::vector<ModsymBoundRow> modsym_bound_report(const CoefficientSeries& f, i64 d_max,
                                                ContragredientProvider& provider,
                                                const AfeOptions& opts) {
  std::vector<ModsymBoundRow> rows;
  for (i64 d = 1; d <= d_max; ++d) {
    double mx = 0.0;
    for (i64 a = 0; a < d; ++a) {
      if (d > 1 && std::gcd(a, d) != 1) continue;
      auto tw = make_additive_twist(f.level, a, d);
      LambdaResult L = approx_L1(f, tw, provider, opts);
      mx = std::max(mx, std::abs(L.value) / kTwoPi);
      if (d == 1) break;  // single fraction 0/1
    }
    auto sp = level_split(f.level, d);
    double shape =
        std::sqrt(static_cast<double>(d)) * std::pow(static_cast<double>(f.level), 0.25);
    for (const auto& pp : factorize(sp.r_d).factors)
      shape *= std::pow(static_cast<double>(pp.p), 0.25);
    rows.push_back({d, mx, shape, mx / shape});
  }
  return rows;
}

}  // namespace atw
