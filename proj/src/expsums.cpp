#include "atwist/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace atw {

namespace {

// unit roots e(j/c) for j = 0..c-1
std::vector<std::complex<double>> root_table(i64 c) {
  std::vector<std::complex<double>> e(c);
  for (i64 j = 0; j < c; ++j) {
    double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(c);
    e[j] = {std::cos(t), std::sin(t)};
  }
  return e;
}

// xbar table: inv[x] = x^{-1} mod c for units, -1 otherwise
std::vector<i64> inverse_table(i64 c) {
  std::vector<i64> inv(c, -1);
  for (i64 x = 0; x < c; ++x)
    if (std::gcd(x, c) == 1) inv[x] = mod_inv(x, c);
  return inv;
}

}  // namespace

std::complex<double> kloosterman(i64 m, i64 n, i64 c) {
  if (c < 1) throw std::domain_error("kloosterman: c must be >= 1");
  if (c == 1) return 1.0;
  auto roots = root_table(c);
  auto inv = inverse_table(c);
  i64 mm = ((m % c) + c) % c, nn = ((n % c) + c) % c;
  std::complex<double> tot = 0.0;
  for (i64 x = 1; x < c; ++x) {
    if (inv[x] < 0) continue;
    tot += roots[(mm * x + nn * inv[x]) % c];
  }
  return tot;
}

std::vector<WeilRow> weil_bound_report(i64 m_max, i64 n_max, i64 c_max) {
  std::vector<WeilRow> rows;
  for (i64 c = 1; c <= c_max; ++c) {
    auto roots = root_table(c);
    auto inv = inverse_table(c);
    double s0 = static_cast<double>(sigma0(c));
    for (i64 m = 0; m <= m_max; ++m) {
      for (i64 n = 0; n <= n_max; ++n) {
        std::complex<double> tot = 0.0;
        if (c == 1) {
          tot = 1.0;
        } else {
          for (i64 x = 1; x < c; ++x) {
            if (inv[x] < 0) continue;
            tot += roots[(m % c * x + n % c * inv[x]) % c];
          }
        }
        i64 g = std::gcd(std::gcd(m, n), c);  // gcd(0, 0, c) = c
        double bound = std::sqrt(static_cast<double>(g)) * std::sqrt(static_cast<double>(c)) * s0;
        rows.push_back({m, n, c, std::abs(tot), bound, std::abs(tot) / bound});
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const WeilRow& a, const WeilRow& b) {
    return a.ratio > b.ratio;
  });
  return rows;
}

}  // namespace atw
