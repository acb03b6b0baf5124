#pragma once

// Kloosterman sums S(m, n; c) = sum_{x mod c, gcd(x,c)=1} e((mx + n*xbar)/c)
// by brute force (c is at most a few thousand at desk scale), with the Weil
// bound |S| <= gcd(m,n,c)^{1/2} c^{1/2} sigma_0(c) as a checked property.

#include <complex>
#include <vector>

#include "atwist/arith.hpp"

namespace atw {

std::complex<double> kloosterman(i64 m, i64 n, i64 c);

struct WeilRow {
  i64 m, n, c;
  double abs_s;
  double bound;
  double ratio;
};

// every (m, n, c) in [0,m_max] x [0,n_max] x [1,c_max], sorted by ratio descending
std::vector<WeilRow> weil_bound_report(i64 m_max, i64 n_max, i64 c_max);

}  // namespace atw
