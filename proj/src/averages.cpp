#include "atwist/averages.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace atw {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double phi_normalizer() {
  static double c = [] {
    double err = 0.0;
    cplx I = adaptive_simpson(
        [](double t) {
          double u = 1.0 - 16.0 * t * t;
          return cplx(u > 1e-14 ? std::exp(-1.0 / u) : 0.0, 0.0);
        },
        -0.25, 0.25, 1e-14, 40, &err);
    return 1.0 / I.real();
  }();
  return c;
}
}  // namespace

double BumpFamily::phi(double t) {
  double u = 1.0 - 16.0 * t * t;
  if (u <= 1e-14) return 0.0;
  return phi_normalizer() * std::exp(-1.0 / u);
}

BumpFamily::BumpFamily(double x, double delta) : x_(x), delta_(delta) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("BumpFamily: x in [0, 1]");
  if (delta <= 0.0 || delta >= 1.0) throw std::domain_error("BumpFamily: delta in (0, 1)");
}

double BumpFamily::h(double t) const {
  // h(t) = int_{t-x-delta}^{t+delta} phi_delta^{per}(v) dv; each integer
  // translate of the bump inside the window contributes Phi(..) differences,
  // with Phi(u) = int_{-1/4}^{u} phi
  t -= std::floor(t);
  auto Phi = [&](double u) {
    if (u <= -0.25) return 0.0;
    if (u >= 0.25) return 1.0;
    double err = 0.0;
    return adaptive_simpson([](double v) { return cplx(BumpFamily::phi(v), 0.0); }, -0.25, u,
                            1e-12, 40, &err)
        .real();
  };
  double lo = (t - x_ - delta_) / delta_, hi = (t + delta_) / delta_;
  double acc = 0.0;
  for (i64 j = -3; j <= 3; ++j) {
    double shift = static_cast<double>(j) / delta_;
    acc += Phi(hi - shift) - Phi(lo - shift);
  }
  return std::clamp(acc, 0.0, 1.0);
}

double BumpFamily::phi_hat(double w) const {
  // int_{-1/4}^{1/4} phi(t) cos(2 pi w t) dt (phi even)
  double err = 0.0;
  return adaptive_simpson(
             [w](double t) { return cplx(BumpFamily::phi(t) * std::cos(kTwoPi * w * t), 0.0); },
             -0.25, 0.25, 1e-13, 40, &err)
      .real();
}

cplx BumpFamily::h_hat(i64 n) const {
  if (n == 0) return {x_ + 2.0 * delta_, 0.0};
  double ph;
  auto it = phi_hat_cache_.find(std::llabs(n));
  if (it != phi_hat_cache_.end()) {
    ph = it->second;
  } else {
    ph = phi_hat(static_cast<double>(std::llabs(n)) * delta_);
    phi_hat_cache_[std::llabs(n)] = ph;
  }
  double nn = static_cast<double>(n);
  cplx e1 = std::exp(cplx(0.0, kTwoPi * nn * delta_));
  cplx e2 = std::exp(cplx(0.0, -kTwoPi * nn * (x_ + delta_)));
  return (e1 - e2) / cplx(0.0, kTwoPi * nn) * ph;
}

AveragesEngine::AveragesEngine(const CoefficientSeries& f, AfeOptions opts)
    : f_(f), provider_(f), opts_(opts) {}

cplx AveragesEngine::L1(i64 a, i64 d) {
  i64 g = std::gcd(((a % d) + d) % d, d);
  if (g == 0) g = d;
  i64 ar = (((a % d) + d) % d) / g, dr = d / g;
  auto key = std::make_pair(ar, dr);
  auto it = l1_cache_.find(key);
  if (it != l1_cache_.end()) return it->second;
  auto tw = make_additive_twist(f_.level, ar, dr);
  cplx v = approx_L1(f_, tw, provider_, opts_).value;
  l1_cache_[key] = v;
  return v;
}

ModularSymbolPair AveragesEngine::symbol(i64 a, i64 d) {
  cplx La = L1(a, d);
  cplx Lb = L1(-a, d);
  ModularSymbolPair out;
  out.a = ((a % d) + d) % d;
  out.d = d;
  out.plus = (0.5 * (La + Lb)).real();
  out.minus = 0.5 * (La - Lb);
  return out;
}

PlusMinus G_M_direct(AveragesEngine& eng, double x, i64 M) {
  if (M < 1) throw std::domain_error("G_M_direct: M >= 1");
  i64 top = static_cast<i64>(std::floor(x * static_cast<double>(M) + 1e-12));
  top = std::min(top, M);
  double plus = 0.0;
  cplx minus = 0.0;
  for (i64 a = 0; a <= top; ++a) {
    auto s = eng.symbol(a, M);
    plus += s.plus;
    minus += s.minus;
  }
  return {plus / static_cast<double>(M), minus / static_cast<double>(M)};
}

std::vector<cplx> alpha_table(AveragesEngine& eng, i64 M) {
  // alpha_rho = (1/M) sum_{a mod M} e(-rho a / M) L(1, f, a/M)
  std::vector<cplx> L(M);
  for (i64 a = 0; a < M; ++a) L[a] = eng.L1(a, M);
  std::vector<cplx> out(M, 0.0);
  for (i64 rho = 0; rho < M; ++rho) {
    cplx acc = 0.0;
    for (i64 a = 0; a < M; ++a) {
      double th = -kTwoPi * static_cast<double>((rho * a) % M) / static_cast<double>(M);
      acc += L[a] * cplx(std::cos(th), std::sin(th));
    }
    out[rho] = acc / static_cast<double>(M);
  }
  return out;
}

cplx alpha(AveragesEngine& eng, i64 n, i64 M) {
  auto tab = alpha_table(eng, M);
  return tab[((n % M) + M) % M];
}

AhResult A_h_pm(AveragesEngine& eng, const BumpFamily& family, i64 M) {
  auto tab = alpha_table(eng, M);
  double amax = 0.0;
  for (auto& v : tab) amax = std::max(amax, std::abs(v));

  AhResult out{0.0, 0.0, 0.0, 0};
  // n = 0 term
  cplx h0 = family.h_hat(0);
  out.plus = h0 * (tab[0] + tab[0]);
  out.minus = h0 * (tab[0] - tab[0]);
  // symmetric truncation: |hat h(n)| <= |phi_hat(n delta)|/(pi |n|); stop after
  // a run of 24 consecutive n with negligible bound
  const double tiny = 1e-13;
  int run = 0;
  i64 n = 1;
  for (; n < 4000000; ++n) {
    cplx hp = family.h_hat(n), hm = family.h_hat(-n);
    i64 rp = n % M, rm = (M - rp) % M;
    // alpha_{-n} = tab[rm], alpha_{n} = tab[rp]
    out.plus += hp * (tab[(M - rp) % M] + tab[rp]) + hm * (tab[rp] + tab[rm]);
    out.minus += hp * (tab[(M - rp) % M] - tab[rp]) + hm * (tab[rp] - tab[rm]);
    double bound = (std::abs(hp) + std::abs(hm)) * amax;
    if (bound < tiny * std::max(1.0, amax)) {
      if (++run >= 24) break;
    } else {
      run = 0;
    }
  }
  out.n_cut = n;
  // tail: hat h decays superpolynomially; charge 24 x the last bound with margin
  out.tail_err = 100.0 * tiny * amax;
  return out;
}

LimitSeries limit_series(const CoefficientSeries& f, double x, i64 N) {
  if (N < 2) throw std::domain_error("limit_series: N >= 2");
  N = std::min(N, f.length());
  KahanSum sp, sm, sp_half, sm_half;
  for (i64 n = 1; n <= N; ++n) {
    double an = f.a(n);
    double th = kTwoPi * static_cast<double>(n) * x;
    // use the periodicity-reduced angle for large n x
    double red = th - kTwoPi * std::floor(static_cast<double>(n) * x);
    double p = an * std::sin(red) / (static_cast<double>(n) * static_cast<double>(n));
    double m = an * (std::cos(red) - 1.0) / (static_cast<double>(n) * static_cast<double>(n));
    sp.add(p);
    sm.add(m);
    if (n <= N / 2) {
      sp_half.add(p);
      sm_half.add(m);
    }
  }
  LimitSeries out;
  out.plus = sp.s / kTwoPi;
  out.minus = cplx(0.0, -1.0) * (sm.s / kTwoPi);  // 1/(2 pi i) = -i/(2 pi)
  // crude certified tail: sum_{n>N} sigma_0(n) n^{-3/2} by dyadic blocks
  double tail = 0.0;
  double n0 = static_cast<double>(N);
  for (int j = 0; j < 80; ++j) {
    tail += (std::log(n0) + 4.4) / std::sqrt(n0);
    n0 *= 2.0;
  }
  out.tail_bound = tail * 2.0 / kTwoPi;  // |cos - 1| <= 2 dominates
  out.half_diff = std::max(std::abs(sp.s - sp_half.s), std::abs(sm.s - sm_half.s)) / kTwoPi;
  return out;
}

double delta_schedule(i64 M, i64 q) {
  if (M <= 1) throw std::domain_error("delta_schedule: M > 1");
  double d = std::pow(static_cast<double>(M), -0.75);
  for (const auto& pp : factorize(std::gcd(q, M)).factors)
    if (ord_p(q, pp.p) >= 2) d *= std::pow(static_cast<double>(pp.p), 0.25);
  double lo = std::pow(static_cast<double>(M), -7.0 / 8.0);
  return std::clamp(d, std::nextafter(lo, 1.0), 0.999);
}

std::vector<ConvergenceRow> convergence_experiment(AveragesEngine& eng, double x,
                                                   const std::vector<i64>& M_list,
                                                   i64 limit_N) {
  if (M_list.empty()) throw std::domain_error("convergence_experiment: empty M list");
  auto lim = limit_series(eng.form(), x, limit_N);
  std::vector<ConvergenceRow> rows;
  for (i64 M : M_list) {
    auto G = G_M_direct(eng, x, M);
    ConvergenceRow r;
    r.M = M;
    r.delta_M = delta_schedule(M, eng.form().level);
    r.G_plus = G.plus;
    r.G_minus = G.minus;
    r.limit_plus = lim.plus;
    r.limit_minus = lim.minus;
    r.err_plus = std::abs(G.plus - lim.plus);
    r.err_minus = std::abs(G.minus - lim.minus);
    double scale = std::pow(static_cast<double>(M), -0.25) *
                   std::pow(static_cast<double>(eng.form().level), 0.25);
    for (const auto& pp : factorize(std::gcd(eng.form().level, M)).factors)
      if (ord_p(eng.form().level, pp.p) >= 2) scale *= std::sqrt(static_cast<double>(pp.p));
    r.predicted_scale = scale;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace atw
