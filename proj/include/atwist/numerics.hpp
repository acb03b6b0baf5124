#pragma once

// Shared special functions and quadrature for the L-function machinery:
//  - complex log-gamma / gamma (Lanczos),
//  - upper incomplete gamma Gamma(s, x) for complex s and real x > 0
//    (series for small x, Lentz continued fraction for large x),
//  - the smoothing kernel V(y) = (1/2 pi i) int_(sigma) (2 pi y)^u G(u) Gamma(u) du
//    with G(u) = exp(u^2).
//
// V is served from a spline table over ln y.  The production integrand uses the
// exact transform
//     V(y) = (1/2 sqrt(pi)) int e^{-v^2/4} exp(-e^{-v}/(2 pi y)) dv,
// a positive integrand that is stable for every y (the vertical-line trapezoid
// cancels catastrophically once V ~ 1); the vertical-line form is kept as a
// test oracle.  V is strictly increasing with V(0+) = 0, V(+inf) = 1.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace atw {

using cplx = std::complex<double>;
using i64 = std::int64_t;

cplx log_gamma(cplx z);
cplx gamma_fn(cplx z);
// upper incomplete Gamma(s, x), x > 0 real, s complex (stable for |s| <~ 20)
cplx upper_gamma(cplx s, double x);

struct SmoothingKernel {
  double sigma = 2.0;  // contour abscissa of the oracle integral
  double T = 8.0;      // truncation of the oracle integral
  double h = 0.05;     // trapezoid step of the oracle integral
};

// production evaluation (positive-integrand transform); absolute accuracy ~1e-14
double V_value(double y);
// the spec'd vertical-line trapezoid on Re u = sigma (test oracle; unstable for
// large y, fine for y <~ 2); returns value with the imaginary part discarded
// after a sanity check
double V_line_oracle(const SmoothingKernel& k, double y);

// Cached spline table of V over ln y; thread-safe to read after first use.
class VTable {
 public:
  static const VTable& instance();
  double operator()(double y) const;
  // largest y with V(y) <= tau (V is increasing); tau in (0, 1)
  double y_for_threshold(double tau) const;

 private:
  VTable();
  double lo_, hi_, step_;
  std::vector<double> vals_;
};

// adaptive Simpson on [a, b] for complex integrands; eps is an absolute target
cplx adaptive_simpson(const std::function<cplx(double)>& f, double a, double b,
                      double eps, int max_depth = 30, double* err_est = nullptr);

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

// in-place radix-2 FFT, a.size() a power of two; sign -1: forward
// (sum x_j e^{-2 pi i j k / n}), sign +1: inverse without the 1/n factor
void fft_pow2(std::vector<cplx>& a, int sign);

// sum_{n > T} n^A e^{-2 pi y n}, rigorous upper bound
double power_tail_bound(i64 T, double y, double A);

}  // namespace atw
