#include "atwist/twists.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "atwist/numerics.hpp"

namespace atw {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx unit(double turns) {
  double t = kTwoPi * turns;
  return {std::cos(t), std::sin(t)};
}

// complex q-series evaluation with resync and certified tail
PointValue eval_q_series(const ModularSeries& g, cplx z) {
  double y = z.imag();
  if (y <= 0) throw std::domain_error("eval_q_series: Im z must be positive");
  const i64 N = g.length();
  const cplx two_pi_i_z = cplx(0.0, kTwoPi) * z;
  cplx w = std::exp(two_pi_i_z);
  cplx wn = 1.0, tot = 0.0;
  double noise = 0.0;
  const bool per_coeff = !g.cerr.empty();
  double rho = std::exp(-kTwoPi * y);
  for (i64 n = 1; n <= N; ++n) {
    if (n % 64 == 1) wn = std::exp(two_pi_i_z * static_cast<double>(n - 1));
    wn *= w;
    tot += g.c[n] * wn;
    if (per_coeff) noise += g.cerr[static_cast<size_t>(n)] * std::abs(wn);
    if (std::abs(wn) < 1e-320) break;
  }
  if (!per_coeff) noise = g.coeff_noise * rho / (1.0 - rho);
  double tail = g.kappa * series_tail_bound(N, y, g.weight) + noise;
  return {tot, tail};
}
}  // namespace

ModularSeries to_modular_series(const CoefficientSeries& f) {
  ModularSeries g;
  g.level = f.level;
  g.weight = f.weight;
  g.c.assign(f.length() + 1, 0.0);
  for (i64 n = 1; n <= f.length(); ++n) g.c[n] = f.a(n);
  return g;
}

ModularSeries twist_coeffs(const CoefficientSeries& f, const DirichletCharacter& chi, i64 N) {
  if (N > f.length()) throw std::invalid_argument("twist_coeffs: N exceeds stored length");
  ModularSeries g;
  i64 cond = chi.conductor();
  if (!chi.is_primitive())
    throw std::invalid_argument("twist_coeffs: chi must be primitive");
  g.level = lcm(f.level, cond * cond);
  g.weight = f.weight;
  g.neben = chi.square();
  g.c.assign(N + 1, 0.0);
  for (i64 n = 1; n <= N; ++n) g.c[n] = f.a(n) * chi.eval(n);
  return g;
}

PointValue evaluate_with_pullback(const ModularSeries& g, cplx z) {
  const i64 N = g.level;
  const i64 k = g.weight;
  cplx factor = 1.0;  // g(z_orig) = factor * g(z_current)
  cplx w = z;
  for (int iter = 0; iter < 400; ++iter) {
    w = {w.real() - std::round(w.real()), w.imag()};
    double y = w.imag();
    // best (c, d), N | c, gcd(c,d)=1, minimizing |c w + d|^2
    double best = 1.0 - 1e-12;
    i64 bc = 0, bd = 0;
    // a point whose Gamma_0(N)-orbit tops out near a cusp not equivalent to
    // infinity cannot be lifted; the search cap keeps such calls cheap and the
    // certified tail in the result reports the (large) uncertainty honestly
    double jm = std::min(1.0 / (static_cast<double>(N) * y), 4.0e6);
    i64 jmax = static_cast<i64>(jm) + 1;
    for (i64 j = 1; j <= jmax; ++j) {
      i64 c = N * j;
      double cy = static_cast<double>(c) * y;
      if (cy * cy >= best) break;
      double d0 = -static_cast<double>(c) * w.real();
      for (i64 d = static_cast<i64>(std::floor(d0)) - 1; d <= static_cast<i64>(std::ceil(d0)) + 1; ++d) {
        if (std::gcd(c, std::abs(d)) != 1) continue;
        double re = static_cast<double>(c) * w.real() + static_cast<double>(d);
        double norm = re * re + cy * cy;
        if (norm < best) {
          best = norm;
          bc = c;
          bd = d;
        }
      }
    }
    if (bc == 0) break;  // reduced
    // complete to (a, b; c, d) in SL2 with N | c: a d - b c = 1
    i64 a, b;
    {
      // extended gcd: x*d + y*c = 1; then a = x, b = -y
      i64 old_r = bd, r = bc, old_s = 1, s = 0;
      while (r != 0) {
        i64 qt = old_r / r, t;
        t = old_r - qt * r; old_r = r; r = t;
        t = old_s - qt * s; old_s = s; s = t;
      }
      if (old_r != 1 && old_r != -1)
        throw std::logic_error("pullback: (c, d) not coprime");
      i64 x = (old_r == 1) ? old_s : -old_s;
      a = x;
      b = (a * bd - 1) / bc;
    }
    cplx denom = static_cast<double>(bc) * w + static_cast<double>(bd);
    cplx neben_val = 1.0;
    if (!g.neben.is_trivial()) {
      neben_val = g.neben.eval(bd);
      if (neben_val == cplx(0.0, 0.0))
        throw std::logic_error("pullback: nebentypus vanished on a unit");
    }
    // g(w) = conj-neben(d) (c w + d)^{-k} g(gamma w)
    cplx denom_pow = 1.0;
    for (i64 i = 0; i < k; ++i) denom_pow *= denom;
    factor *= std::conj(neben_val) / denom_pow;
    w = (static_cast<double>(a) * w + static_cast<double>(b)) / denom;
  }
  double per_point = 1e-14 * (1.0 + std::abs(factor));
  PointValue pv = eval_q_series(g, w);
  return {factor * pv.value, std::abs(factor) * pv.err + per_point};
}

cplx AtkinLehnerMatrix::apply(cplx z) const {
  return (static_cast<double>(a()) * z + static_cast<double>(b())) /
         (static_cast<double>(c()) * z + static_cast<double>(d()));
}

AtkinLehnerMatrix atkin_lehner_matrix(i64 q, i64 R) {
  if (q < 1 || R < 1 || q % R != 0 || std::gcd(R, q / R) != 1)
    throw std::domain_error("atkin_lehner_matrix: need R | q with gcd(R, q/R) = 1");
  AtkinLehnerMatrix W;
  W.level = q;
  W.R = R;
  if (R == 1) {
    W.x1 = 1; W.x2 = 0; W.x3 = 0; W.x4 = 1;  // identity (x2 == 1 mod 1 is vacuous)
    return W;
  }
  const i64 Q = q / R;
  // x1 = 1, x2 = 1 (minimal nonnegative); solve R x4 - Q x3 = 1
  i64 u = mod_inv(R % Q == 0 ? 1 : R, Q);  // R u == 1 (mod Q); Q = 1 handled below
  i64 x4, x3;
  if (Q == 1) {
    x4 = 0;
    x3 = -1;
  } else {
    x4 = u;
    x3 = (R * x4 - 1) / Q;
    // minimize |x3| over the family (x4 + tQ, x3 + tR)
    i64 t = -(2 * x3 + R) / (2 * R);  // round x3/R to nearest
    while (std::abs(x3 + (t + 1) * R) < std::abs(x3 + t * R)) ++t;
    while (std::abs(x3 + (t - 1) * R) < std::abs(x3 + t * R)) --t;
    x3 += t * R;
    x4 += t * Q;
  }
  W.x1 = 1; W.x2 = 1; W.x3 = x3; W.x4 = x4;
  if (R * (R * W.x1 * W.x4 - Q * W.x2 * W.x3) != R)
    throw std::logic_error("atkin_lehner_matrix: determinant normalization failed");
  return W;
}

namespace {

// nebentypus of g|W_R: conj(psi_R) * psi_{N/R}
DirichletCharacter al_flip_neben(const DirichletCharacter& psi, i64 R) {
  if (psi.is_trivial()) return psi;
  // view psi mod N, conjugate the components at primes dividing R
  i64 M = psi.modulus();
  auto grp = UnitGroup::get(M);
  std::vector<i64> e = psi.exponents();
  // component -> prime: reconstruct the builder's order (ascending primes;
  // p = 2, e >= 3 contributes two components)
  std::vector<i64> comp_prime;
  for (const auto& pp : factorize(M).factors) {
    if (pp.p == 2) {
      if (pp.e == 1) continue;
      comp_prime.push_back(2);
      if (pp.e >= 3) comp_prime.push_back(2);
    } else {
      comp_prime.push_back(pp.p);
    }
  }
  if (comp_prime.size() != e.size())
    throw std::logic_error("al_flip_neben: component bookkeeping mismatch");
  for (size_t i = 0; i < e.size(); ++i)
    if (R % comp_prime[i] == 0) e[i] = (grp->ord[i] - e[i]) % grp->ord[i];
  return DirichletCharacter(M, std::move(e));
}

}  // namespace

ModularSeries ContragredientSeries::as_series() const {
  ModularSeries g;
  g.c = b;
  g.level = level_out;
  g.weight = 2;
  g.neben = neben_out;
  g.kappa = kappa;
  g.cerr = err;
  return g;
}

ContragredientSeries apply_atkin_lehner_numeric(const ModularSeries& g, i64 R, i64 M_out,
                                                const ALOptions& opts) {
  const i64 N = g.level;
  if (N % R != 0 || std::gcd(R, N / R) != 1)
    throw std::domain_error("apply_atkin_lehner_numeric: need R | level, gcd(R, level/R) = 1");
  if (M_out < 1) throw std::domain_error("apply_atkin_lehner_numeric: M_out >= 1");
  AtkinLehnerMatrix W = atkin_lehner_matrix(N, R);
  const i64 k = g.weight;
  double Rk2 = std::pow(static_cast<double>(R), static_cast<double>(k) / 2.0);

  // unfolding amplification e^{2 pi M_out y0} capped at 1e4; per-sample errors
  // sit at ~1e-13, keeping the recovered b(m) near 1e-9
  double y0 = opts.y0 > 0 ? opts.y0
                          : std::min(1.0 / std::sqrt(static_cast<double>(N)),
                                     std::log(1e4) / (kTwoPi * static_cast<double>(M_out)));
  for (int attempt = 0;; ++attempt) {
    i64 S = std::max<i64>(2 * M_out + 16, static_cast<i64>(42.0 / (kTwoPi * y0)) + 1);
    i64 S2 = 1;
    while (S2 < S) S2 <<= 1;
    S = S2;
    // periodicity lets every sample use the representative x in [-1/2, 1/2),
    // halving the worst Moebius denominator |c z + d|
    auto rep = [&](i64 j) {
      double x = static_cast<double>(j) / static_cast<double>(S);
      if (x >= 0.5) x -= 1.0;
      return cplx(x, y0);
    };
    // required series length: a raw-expansion fallback at the lowest
    // transformed sample height must still certify the per-point tolerance
    double min_im = 1e300;
    for (i64 j = 0; j < S; ++j) min_im = std::min(min_im, W.apply(rep(j)).imag());
    double eps_pt = opts.target_err /
                    (3.0 * std::exp(kTwoPi * static_cast<double>(M_out) * y0));
    i64 needed = series_length_for(min_im, eps_pt / (2.0 * g.kappa), g.weight);
    if (needed > g.length())
      throw TruncationError("apply_atkin_lehner_numeric: series too short for the sample "
                            "heights",
                            needed);

    std::vector<cplx> G(S);
    double eval_err = 0.0;
    double g_rms = 0.0;
    for (i64 j = 0; j < S; ++j) {
      cplx zj = rep(j);
      cplx wj = W.apply(zj);
      PointValue pv = evaluate_with_pullback(g, wj);
      cplx denom = static_cast<double>(W.c()) * zj + static_cast<double>(W.d());
      cplx denom_pow = 1.0;
      for (i64 i = 0; i < k; ++i) denom_pow *= denom;
      G[j] = Rk2 * pv.value / denom_pow;
      eval_err += std::abs(Rk2 / denom_pow) * pv.err;
      g_rms += std::norm(G[j]);
    }
    eval_err /= static_cast<double>(S);
    g_rms = std::sqrt(g_rms / static_cast<double>(S));

    ContragredientSeries cs;
    cs.b.assign(M_out + 1, 0.0);
    cs.err.assign(M_out + 1, 0.0);
    cs.source = ContragredientSeries::Source::numericAL;
    cs.level_out = N;
    cs.neben_out = al_flip_neben(g.neben, R);
    // b(m) = e^{2 pi m y0} (1/S) sum_j G_j e^{-2 pi i m j / S}
    fft_pow2(G, -1);
    for (i64 m = 1; m <= M_out; ++m)
      cs.b[m] = G[m] / static_cast<double>(S) * std::exp(kTwoPi * static_cast<double>(m) * y0);
    // measured coefficient-size constant and error estimates
    double kap = 1.0;
    for (i64 m = 1; m <= M_out; ++m) {
      double norm = static_cast<double>(sigma0(m)) *
                    std::pow(static_cast<double>(m), (static_cast<double>(k) - 1.0) / 2.0);
      kap = std::max(kap, std::abs(cs.b[m]) / norm);
    }
    cs.kappa = 2.0 * kap;
    double worst = 0.0;
    double alias_base = std::exp(-kTwoPi * static_cast<double>(S) * y0);
    double dft_round = 1e-16 * std::sqrt(static_cast<double>(S)) * g_rms;
    for (i64 m = 1; m <= M_out; ++m) {
      double amp = std::exp(kTwoPi * static_cast<double>(m) * y0);
      double alias = cs.kappa * 2.0 * static_cast<double>(m + S) * alias_base /
                     (1.0 - alias_base);
      cs.err[m] = (eval_err + dft_round) * amp + alias;
      worst = std::max(worst, cs.err[m]);
    }
    if (worst <= opts.target_err || attempt >= opts.max_retries) {
      if (worst > opts.target_err) {
        std::ostringstream os;
        os << "apply_atkin_lehner_numeric: M_out = " << M_out
           << " unreachable at y0 = " << y0 << " (worst err " << worst
           << "); try a smaller y0";
        throw std::runtime_error(os.str());
      }
      return cs;
    }
    y0 *= 0.5;
  }
}

cplx pseudo_eigenvalue(const CoefficientSeries& F, i64 q_F, i64 R) {
  if (!F.normalized) throw std::invalid_argument("pseudo_eigenvalue: F must be normalized");
  if (R == 1) return 1.0;
  ModularSeries g = to_modular_series(F);
  g.level = q_F;
  if (F.character) {
    DirichletCharacter tag = character_by_index(F.character->first, F.character->second);
    g.neben = tag;
  }
  ContragredientSeries cs = apply_atkin_lehner_numeric(g, R, 8);
  return cs.b[1];
}

TwistDecomposition twist_decomposition(const CoefficientSeries& f, const DirichletCharacter& chi,
                                       const CoefficientSeries& F_data,
                                       std::optional<DecompositionContext> ctx) {
  if (!chi.is_primitive())
    throw std::invalid_argument("twist_decomposition: chi must be primitive");
  if (!F_data.normalized)
    throw std::runtime_error("twist_decomposition: F data is not normalized (a(1) != 1)");
  const i64 q = f.level;
  const i64 r_star = chi.modulus();
  const i64 q_prime = F_data.level;
  const i64 k = f.weight;

  TwistDecomposition dec;
  dec.chi = chi;
  dec.F_level = q_prime;
  dec.F_coeffs = F_data;

  if (F_data.character) {
    DirichletCharacter tag =
        character_by_index(F_data.character->first, F_data.character->second);
    DirichletCharacter want = chi.square().primitive_part();
    if (!(tag.primitive_part() == want))
      throw std::runtime_error(
          "twist_decomposition: F data carries a nebentypus tag that is not chi^2");
  }

  // R_* = r_*-primary part of q; R_*' = (r_*, q')-primary part of q'
  dec.R_star = 1;
  for (const auto& pp : factorize(r_star).factors) {
    i64 pe = 1;
    for (int j = 0; j < ord_p(q, pp.p); ++j) pe *= pp.p;
    dec.R_star *= pe;
  }
  dec.R_star_prime = 1;
  for (const auto& pp : factorize(r_star).factors) {
    if (q_prime % pp.p != 0) continue;
    i64 pe = 1;
    for (int j = 0; j < ord_p(q_prime, pp.p); ++j) pe *= pp.p;
    dec.R_star_prime *= pe;
  }
  if (lcm(q, r_star * r_star) % q_prime != 0)
    throw std::runtime_error("twist_decomposition: q' does not divide lcm(q, r_*^2)");
  if (dec.R_star != 0 && q_prime % (q / dec.R_star) != 0)
    throw std::runtime_error("twist_decomposition: (q/R_*) does not divide q'");

  DecompositionContext c = ctx.value_or(
      DecompositionContext{q, dec.R_star, lcm(dec.R_star, r_star * r_star)});
  dec.q = q;
  dec.R = c.R;
  dec.R_prime = c.R_prime;

  DirichletCharacter chi2 = chi.square().primitive_part();

  // r_*0 per the U_p != 0 condition: p !| q' always counts; p | q' counts iff a_chi(p) != 0
  dec.r_star0 = 1;
  for (const auto& pp : factorize(r_star).factors) {
    i64 p = pp.p;
    if (q_prime % p != 0) {
      dec.r_star0 *= p * p;
    } else if (p <= F_data.length() && std::abs(F_data.a(p)) > 1e-12) {
      dec.r_star0 *= p;
    }
  }

  // beta multiplicative on divisors of r_*0
  dec.beta.clear();
  for (i64 l : divisors(dec.r_star0)) {
    cplx v = 1.0;
    for (const auto& pp : factorize(l).factors) {
      i64 p = pp.p;
      if (pp.e == 1) {
        v *= -F_data.a(p);
      } else if (pp.e == 2) {
        double pk1 = 1.0;
        for (i64 j = 0; j < k - 1; ++j) pk1 *= static_cast<double>(p);
        v *= -pk1 * chi2.eval(p);
      } else {
        v = 0.0;
      }
    }
    dec.beta[l] = v;
  }

  // Q_* = R_* R' / (R_*' R r_*0), integral by construction
  i64 num = dec.R_star * c.R_prime;
  i64 den = dec.R_star_prime * c.R * dec.r_star0;
  if (num % den != 0)
    throw std::runtime_error("twist_decomposition: Q_* is not integral (invariant violation)");
  dec.Q_star = num / den;

  // reconstruction: a(n) chi(n) = sum_{l | r_*0, l | n} beta(l) a_chi(n/l)
  i64 n_max = std::min(f.length(), F_data.length());
  for (i64 n = 1; n <= n_max; ++n) {
    cplx lhs = f.a(n) * chi.eval(n);
    cplx rhs = 0.0;
    for (const auto& [l, bv] : dec.beta)
      if (n % l == 0) rhs += bv * F_data.a(n / l);
    if (std::abs(lhs - rhs) > 1e-9 * (1.0 + std::abs(lhs))) {
      std::ostringstream os;
      os << "twist_decomposition: reconstruction mismatch at n = " << n << " (lhs "
         << lhs.real() << "+" << lhs.imag() << "i, rhs " << rhs.real() << "+" << rhs.imag()
         << "i); wrong F data?";
      throw std::runtime_error(os.str());
    }
  }

  dec.R_op = c.R * dec.R_star_prime / dec.R_star;
  if (q_prime % dec.R_op != 0 || std::gcd(dec.R_op, q_prime / dec.R_op) != 1)
    throw std::runtime_error("twist_decomposition: R R_*'/R_* is not an exact divisor of q'");
  dec.lambda = pseudo_eigenvalue(F_data, q_prime, dec.R_op);
  return dec;
}

namespace {

// coefficients of the Atkin-Lehner image newform conj(lambda) F|W_{R_op}:
// tilde a(p) = conj(chi^2)(p) a_chi(p) for p !| R_op, conj(a_chi(p)) for
// p | R_op; extended by the Hecke recursion with nebentypus conj(chi^2) at
// level q' (the image is new of the same level).
std::vector<cplx> al_image_coeffs(const TwistDecomposition& dec, i64 N) {
  const i64 L = dec.F_level;
  DirichletCharacter chi2bar = dec.chi.square().primitive_part().conj();
  std::vector<cplx> a(N + 1, 0.0);
  if (N >= 1) a[1] = 1.0;
  std::vector<cplx> ap(N + 1, 0.0);
  for (i64 n = 2; n <= N; ++n) {
    Factorization fn = factorize(n);
    if (fn.factors.size() == 1) {
      i64 p = fn.factors[0].p;
      if (fn.factors[0].e == 1) {
        if (p > dec.F_coeffs.length())
          throw std::runtime_error("al_image_coeffs: F data too short");
        ap[p] = (dec.R_op % p == 0) ? std::conj(cplx(dec.F_coeffs.a(p), 0.0))
                                    : chi2bar.eval(p) * dec.F_coeffs.a(p);
        a[n] = ap[p];
      } else {
        i64 pe1 = n / p, pe2 = pe1 / p;
        if (L % p == 0) {
          a[n] = ap[p] * a[pe1];
        } else {
          double pk1 = 1.0;
          for (i64 j = 0; j < dec.F_coeffs.weight - 1; ++j) pk1 *= static_cast<double>(p);
          a[n] = ap[p] * a[pe1] - chi2bar.eval(p) * pk1 * a[pe2];
        }
      }
    } else {
      i64 m = 1;
      for (int j = 0; j < fn.factors[0].e; ++j) m *= fn.factors[0].p;
      a[n] = a[m] * a[n / m];
    }
  }
  return a;
}

}  // namespace

ContragredientSeries contragredient_from_decomposition(const TwistDecomposition& dec, i64 M_out) {
  const i64 q = dec.q;
  const i64 k = 2;
  ContragredientSeries cs;
  cs.source = ContragredientSeries::Source::decomposition;
  cs.chi = dec.chi;
  cs.support_modulus = dec.Q_star;
  cs.b.assign(M_out + 1, 0.0);
  cs.err.assign(M_out + 1, 0.0);
  std::vector<cplx> ta = al_image_coeffs(dec, M_out);
  for (const auto& [l, bv] : dec.beta) {
    i64 D = dec.Q_star * (dec.r_star0 / l);
    double scale = std::pow(static_cast<double>(l), -static_cast<double>(k) / 2.0) *
                   std::pow(static_cast<double>(D), static_cast<double>(k) / 2.0);
    for (i64 n = 1; D * n <= M_out; ++n) cs.b[D * n] += dec.lambda * bv * scale * ta[n];
  }
  cs.level_out = dec.R_prime * (q / dec.R);
  cs.neben_out = dec.chi.square().conj();
  double kap = 1.0;
  for (i64 m = 1; m <= M_out; ++m) {
    double norm = static_cast<double>(sigma0(m)) * std::sqrt(static_cast<double>(m));
    kap = std::max(kap, std::abs(cs.b[m]) / norm);
  }
  cs.kappa = 2.0 * kap;
  return cs;
}

std::vector<FourierBoundRow> fourier_bound_report(const ContragredientSeries& cs, i64 r_star0,
                                                  double eps) {
  std::vector<FourierBoundRow> rows;
  i64 Q = std::max<i64>(1, cs.support_modulus);
  double sig = sigma_real(-1.0 + 2.0 * eps, r_star0);
  for (i64 m = 1; Q * m <= cs.length(); ++m) {
    double normalized = std::abs(cs.b[Q * m]) / std::sqrt(static_cast<double>(Q * m));
    double shape = std::pow(static_cast<double>(m) / static_cast<double>(r_star0), eps) *
                   std::sqrt(static_cast<double>(Q * r_star0)) * sig;
    rows.push_back({m, normalized, normalized / shape});
  }
  return rows;
}

}  // namespace atw
