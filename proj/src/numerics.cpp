#include "atwist/numerics.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace atw {

namespace {
constexpr double kPi = std::numbers::pi;

// Lanczos, g = 7, n = 9 (double precision)
constexpr double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
}  // namespace

cplx log_gamma(cplx z) {
  if (z.real() < 0.5) {
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx gamma_fn(cplx z) { return std::exp(log_gamma(z)); }

namespace {

// regularized-free series: gamma(s,x) = x^s e^{-x} sum_{n>=0} x^n / (s(s+1)...(s+n))
cplx lower_gamma_series(cplx s, double x) {
  cplx denom = s;
  cplx term = 1.0 / s;
  cplx sum = term;
  for (int n = 1; n < 600; ++n) {
    denom = s + static_cast<double>(n);
    term *= x / denom;
    sum += term;
    if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
  }
  return std::pow(x, s) * std::exp(-x) * sum;
}

// Lentz continued fraction for Gamma(s,x), x >= |s| + 4 territory
cplx upper_gamma_cf(cplx s, double x) {
  const double tiny = 1e-300;
  cplx b = x + 1.0 - s;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 400; ++i) {
    cplx an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    cplx delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::pow(x, s) * std::exp(-x) * h;
}

}  // namespace

cplx upper_gamma(cplx s, double x) {
  if (x < 0) throw std::domain_error("upper_gamma: x must be >= 0");
  if (x == 0) return gamma_fn(s);
  if (x > 700.0) return 0.0;  // e^{-x} underflow; |Gamma(s,x)| < 1e-290 in our s-range
  if (x >= std::abs(s) + 4.0) return upper_gamma_cf(s, x);
  return gamma_fn(s) - lower_gamma_series(s, x);
}

double V_value(double y) {
  if (y <= 0) return 0.0;
  const double x = 1.0 / (2.0 * kPi * y);
  // (1/2 sqrt(pi)) int e^{-v^2/4} exp(-x e^{-v}) dv; integrand supported where
  // both factors live: v in [-18, max(18, ln x + 45)]
  double lo = -18.0;
  double hi = std::max(18.0, std::log(std::max(x, 1.0)) + 45.0);
  const double h = 1.0 / 16.0;
  KahanSum acc;
  for (double v = lo; v <= hi; v += h) {
    double ex = -v * v / 4.0 - x * std::exp(-v);
    if (ex > -745.0) acc.add(std::exp(ex));
  }
  return acc.s * h / (2.0 * std::sqrt(kPi));
}

double V_line_oracle(const SmoothingKernel& k, double y) {
  // trapezoid on u = sigma + it, |t| <= T, step h
  cplx tot = 0.0;
  const double l2py = std::log(2.0 * kPi * y);
  for (double t = -k.T; t <= k.T + 1e-12; t += k.h) {
    cplx u{k.sigma, t};
    cplx integrand = std::exp(u * l2py + u * u + log_gamma(u));
    double w = (std::abs(t + k.T) < 1e-12 || std::abs(t - k.T) < 1e-12) ? 0.5 : 1.0;
    tot += w * integrand;
  }
  tot *= k.h / (2.0 * kPi);
  if (std::abs(tot.imag()) > 1e-8 * (1.0 + std::abs(tot.real())))
    throw std::runtime_error("V_line_oracle: imaginary residue too large");
  return tot.real();
}

VTable::VTable() {
  // ln y from -16 (V ~ 1e-21) to 30 (1 - V ~ 4e-14), capped outside
  lo_ = -16.0;
  hi_ = 30.0;
  step_ = 1.0 / 256.0;
  size_t n = static_cast<size_t>((hi_ - lo_) / step_) + 2;
  vals_.resize(n);
  for (size_t i = 0; i < n; ++i) vals_[i] = V_value(std::exp(lo_ + step_ * static_cast<double>(i)));
}

const VTable& VTable::instance() {
  static VTable table;
  return table;
}

double VTable::operator()(double y) const {
  if (y <= 0) return 0.0;
  double t = std::log(y);
  if (t <= lo_) return 0.0;
  if (t >= hi_) return 1.0;
  double u = (t - lo_) / step_;
  size_t i = static_cast<size_t>(u);
  if (i == 0) i = 1;
  if (i + 2 >= vals_.size()) i = vals_.size() - 3;
  double f = u - static_cast<double>(i);
  // 4-point (cubic) Lagrange interpolation on the uniform grid
  double m1 = vals_[i - 1], p0 = vals_[i], p1 = vals_[i + 1], p2 = vals_[i + 2];
  double a = p0;
  double b = (p1 - m1) / 2.0;
  double c = m1 - 2.5 * p0 + 2.0 * p1 - 0.5 * p2;
  double d = -0.5 * m1 + 1.5 * p0 - 1.5 * p1 + 0.5 * p2;
  return std::max(0.0, a + f * (b + f * (c + f * d)));
}

double VTable::y_for_threshold(double tau) const {
  if (tau <= 0 || tau >= 1) throw std::domain_error("y_for_threshold: tau in (0,1)");
  double lo = std::exp(lo_), hi = std::exp(hi_);
  for (int it = 0; it < 200; ++it) {
    double mid = std::sqrt(lo * hi);
    if ((*this)(mid) <= tau)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

namespace {
cplx simpson_rec(const std::function<cplx(double)>& f, double a, double b, cplx fa, cplx fb,
                 cplx fm, cplx whole, double eps, int depth, double* err) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  cplx flm = f(lm), frm = f(rm);
  cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  cplx delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
    if (err) *err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, fm, flm, left, eps / 2.0, depth - 1, err) +
         simpson_rec(f, m, b, fm, fb, frm, right, eps / 2.0, depth - 1, err);
}
}  // namespace

cplx adaptive_simpson(const std::function<cplx(double)>& f, double a, double b, double eps,
                      int max_depth, double* err_est) {
  if (err_est) *err_est = 0.0;
  cplx fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fb, fm, whole, eps, max_depth, err_est);
}

void fft_pow2(std::vector<cplx>& a, int sign) {
  const size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::domain_error("fft_pow2: size must be a power of two");
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = static_cast<double>(sign) * 2.0 * kPi / static_cast<double>(len);
    cplx wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cplx w = 1.0;
      for (size_t j = 0; j < len / 2; ++j) {
        cplx u = a[i + j], v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

double power_tail_bound(i64 T, double y, double A) {
  // f(t) = t^A e^{-Lt} is unimodal with peak at A/L; on the increasing part
  // f(n) <= int_n^{n+1} f, on the decreasing part f(n) <= int_{n-1}^n f, so
  //   sum_{n>T} f(n) <= int_T^inf f(t) dt + f(peak-or-first-term).
  const double L = 2.0 * kPi * y;
  if (L <= 0) return 1e300;
  double t0 = static_cast<double>(T);
  double p = std::max(A / L, t0 + 1.0);
  double lead = std::exp(A * std::log(p) - L * p);
  double integral;
  if (A == 0.0) {
    integral = std::exp(-L * t0) / L;
  } else {
    integral = std::abs(upper_gamma(cplx(A + 1.0, 0.0), L * std::max(t0, 1e-12))) /
               std::pow(L, A + 1.0);
  }
  return integral + lead;
}

}  // namespace atw
