#include "atwist/forms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "atwist/numerics.hpp"

namespace atw {

namespace {

// pentagonal-number support of E(x) = prod_{n>=1} (1 - x^n) = sum_j (-1)^j x^{j(3j-1)/2}
std::vector<std::pair<i64, int>> pentagonal_terms(i64 N) {
  std::vector<std::pair<i64, int>> t;
  for (i64 k = 1;; ++k) {
    i64 g1 = k * (3 * k - 1) / 2;
    i64 g2 = k * (3 * k + 1) / 2;
    int s = (k % 2 == 1) ? -1 : 1;
    if (g1 > N) break;
    t.emplace_back(g1, s);
    if (g2 <= N) t.emplace_back(g2, s);
  }
  std::sort(t.begin(), t.end());
  return t;
}

// c *= E(x^m), truncated at degree N (descending update reads old values only)
void mult_eta_factor(std::vector<i64>& c, i64 m, i64 N,
                     const std::vector<std::pair<i64, int>>& pent) {
  for (i64 k = N; k >= 0; --k) {
    i64 acc = c[k];
    for (const auto& [g, s] : pent) {
      i64 off = m * g;
      if (off > k) break;
      acc += s * c[k - off];
    }
    c[k] = acc;
  }
}

// c /= E(x^m): ascending recurrence u[k] = c[k] - sum_{g>0} s_g u[k - m g]
void div_eta_factor(std::vector<i64>& c, i64 m, i64 N,
                    const std::vector<std::pair<i64, int>>& pent) {
  for (i64 k = 0; k <= N; ++k) {
    i64 acc = c[k];
    for (const auto& [g, s] : pent) {
      i64 off = m * g;
      if (off > k) break;
      acc -= s * c[k - off];
    }
    c[k] = acc;
  }
}

}  // namespace

i64 EtaQuotientSpec::weight_times_two() const {
  i64 s = 0;
  for (const auto& [m, e] : components) s += e;
  return s;
}

i64 EtaQuotientSpec::offset_numerator() const {
  i64 s = 0;
  for (const auto& [m, e] : components) s += m * e;
  return s;
}

void EtaQuotientSpec::validate() const {
  if (components.empty()) throw std::invalid_argument("eta spec: no components");
  if (weight_times_two() % 2 != 0 || weight_times_two() <= 0)
    throw std::invalid_argument("eta spec: sum of exponents must be a positive even integer");
  if (offset_numerator() % 24 != 0)
    throw std::invalid_argument("eta spec: sum m*e = " + std::to_string(offset_numerator()) +
                                " is not 0 mod 24 (fractional q-power offset)");
  for (const auto& [m, e] : components) {
    if (m < 1) throw std::invalid_argument("eta spec: multiplier must be positive");
    if (level % m != 0) throw std::invalid_argument("eta spec: multiplier must divide the level");
  }
}

std::string EtaQuotientSpec::label() const {
  std::ostringstream os;
  os << "eta";
  for (const auto& [m, e] : components) os << "_" << m << "^" << e;
  os << "@" << level;
  return os.str();
}

CoefficientSeries eta_quotient_coeffs(const EtaQuotientSpec& spec, i64 N) {
  spec.validate();
  i64 t = spec.offset_numerator() / 24;
  if (t < 0) throw std::invalid_argument("eta spec: negative q-expansion offset");
  i64 deg = N - t;  // need coefficients of the product up to x^deg
  if (deg < 0) deg = 0;
  std::vector<i64> c(deg + 1, 0);
  c[0] = 1;
  for (const auto& [m, e] : spec.components) {
    auto pent = pentagonal_terms(deg / m + 1);
    for (i64 j = 0; j < std::abs(e); ++j) {
      if (e > 0)
        mult_eta_factor(c, m, deg, pent);
      else
        div_eta_factor(c, m, deg, pent);
    }
  }
  CoefficientSeries s;
  s.label = spec.label();
  s.level = spec.level;
  s.weight = spec.weight_times_two() / 2;
  s.ai.assign(N + 1, 0);
  for (i64 n = t; n <= N; ++n) s.ai[n] = c[n - t];
  s.normalized = (N >= 1 && s.ai[1] == 1);
  return s;
}

EtaQuotientSpec eta_spec_level11() { return {{{1, 2}, {11, 2}}, 11}; }
EtaQuotientSpec eta_spec_level27() { return {{{3, 2}, {9, 2}}, 27}; }

CoefficientSeries load_coeffs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_coeffs: cannot open " + path);
  CoefficientSeries s;
  std::string line;
  int lineno = 0;
  bool in_coeffs = false;
  bool have_level = false, have_weight = false;
  bool any_float = false;
  std::vector<double> vals;
  i64 expect = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream is(line);
    if (line[0] == '#') {
      std::string hash, kw;
      is >> hash >> kw;
      if (kw == "newform") is >> s.label;
      continue;  // other #-lines ignored
    }
    std::string kw;
    is >> kw;
    auto fail = [&](const std::string& msg) {
      throw std::runtime_error("load_coeffs: " + path + ":" + std::to_string(lineno) + ": " + msg);
    };
    if (!in_coeffs) {
      if (kw == "level") {
        if (!(is >> s.level)) fail("bad level");
        have_level = true;
      } else if (kw == "weight") {
        if (!(is >> s.weight)) fail("bad weight");
        have_weight = true;
      } else if (kw == "character") {
        i64 m, idx;
        if (!(is >> m >> idx)) fail("bad character line");
        s.character = {m, idx};
      } else if (kw == "coeffs") {
        if (!have_level) fail("missing header field: level");
        if (!have_weight) fail("missing header field: weight");
        in_coeffs = true;
      } else {
        fail("unknown header line '" + kw + "'");
      }
    } else {
      i64 n;
      double v;
      std::istringstream is2(line);
      if (!(is2 >> n >> v)) fail("bad coefficient line");
      if (n == expect - 1) fail("duplicate index " + std::to_string(n));
      if (n != expect) fail("non-contiguous index " + std::to_string(n) + " (expected " +
                            std::to_string(expect) + ")");
      // exactness: re-read as integer when the token looks integral
      std::string tok1, tok2;
      std::istringstream is3(line);
      is3 >> tok1 >> tok2;
      if (tok2.find_first_of(".eE") != std::string::npos) any_float = true;
      vals.push_back(v);
      ++expect;
    }
  }
  if (!in_coeffs) throw std::runtime_error("load_coeffs: " + path + ": missing coeffs section");
  if (vals.empty()) throw std::runtime_error("load_coeffs: " + path + ": empty coeffs section");
  s.exact = !any_float;
  if (s.exact) {
    s.ai.assign(vals.size() + 1, 0);
    for (size_t i = 0; i < vals.size(); ++i) s.ai[i + 1] = static_cast<i64>(std::llround(vals[i]));
    s.normalized = (s.ai[1] == 1);
  } else {
    s.af.assign(vals.size() + 1, 0.0);
    for (size_t i = 0; i < vals.size(); ++i) s.af[i + 1] = vals[i];
    s.normalized = std::abs(s.af[1] - 1.0) < 1e-12;
  }
  return s;
}

void save_coeffs(const CoefficientSeries& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_coeffs: cannot open " + path);
  out << "# newform " << (s.label.empty() ? "unnamed" : s.label) << "\n";
  out << "level " << s.level << "\n";
  out << "weight " << s.weight << "\n";
  if (s.character) out << "character " << s.character->first << " " << s.character->second << "\n";
  out << "coeffs\n";
  for (i64 n = 1; n <= s.length(); ++n) {
    if (s.exact)
      out << n << " " << s.ai[n] << "\n";
    else
      out << n << " " << s.af[n] << "\n";
  }
}

bool HeckeReport::all_pass() const {
  for (const auto& l : lines)
    if (l.failed > 0) return false;
  return true;
}

std::string HeckeReport::summary() const {
  std::ostringstream os;
  for (const auto& l : lines) {
    os << l.relation << ": " << (l.checked - l.failed) << "/" << l.checked << " pass";
    if (l.failed > 0) os << "  [first failure: " << l.first_failure << "]";
    os << "\n";
  }
  return os.str();
}

HeckeReport verify_hecke(const CoefficientSeries& s) {
  if (!s.normalized) throw std::invalid_argument("verify_hecke: series not normalized (a(1) != 1)");
  const i64 N = s.length();
  const i64 q = s.level, k = s.weight;
  HeckeReport rep;
  HeckeReport::Line mult{"coprime multiplicativity", 0, 0, ""};
  HeckeReport::Line good{"p !| q recursion", 0, 0, ""};
  HeckeReport::Line bad1{"p || q recursion", 0, 0, ""};
  HeckeReport::Line bad2{"p^2 | q vanishing", 0, 0, ""};

  auto note = [](HeckeReport::Line& l, bool ok, const std::string& what) {
    ++l.checked;
    if (!ok) {
      ++l.failed;
      if (l.first_failure.empty()) l.first_failure = what;
    }
  };

  for (i64 m = 2; m * 2 <= N; ++m) {
    for (i64 n = m + 1; m * n <= N; ++n) {
      if (std::gcd(m, n) != 1) continue;
      bool ok;
      if (s.exact)
        ok = s.ai[m * n] == s.ai[m] * s.ai[n];
      else
        ok = std::abs(s.af[m * n] - s.af[m] * s.af[n]) <
             1e-6 * (1.0 + std::abs(s.af[m] * s.af[n]));
      note(mult, ok, "(m,n)=(" + std::to_string(m) + "," + std::to_string(n) + ")");
    }
  }

  for (i64 p = 2; p <= N; ++p) {
    Factorization fp = factorize(p);
    if (fp.factors.size() != 1 || fp.factors[0].e != 1) continue;  // primes only
    i64 pk1 = 1;
    for (i64 j = 0; j < k - 1; ++j) pk1 *= p;
    if (q % p != 0) {
      for (i64 pj = p; pj * p <= N; pj *= p) {
        // a(p^{j+1}) = a(p) a(p^j) - p^{k-1} a(p^{j-1})
        bool ok;
        if (s.exact)
          ok = s.ai[pj * p] == s.ai[p] * s.ai[pj] - pk1 * s.ai[pj / p];
        else
          ok = std::abs(s.af[pj * p] - (s.af[p] * s.af[pj] - static_cast<double>(pk1) * s.af[pj / p])) < 1e-6;
        note(good, ok, "p^j=" + std::to_string(pj * p));
      }
    } else if (q % (p * p) != 0) {
      for (i64 pj = p; pj * p <= N; pj *= p) {
        bool ok = s.exact ? (s.ai[pj * p] == s.ai[p] * s.ai[pj])
                          : std::abs(s.af[pj * p] - s.af[p] * s.af[pj]) < 1e-6;
        note(bad1, ok, "p^j=" + std::to_string(pj * p));
      }
    } else {
      for (i64 pj = p; pj <= N; pj *= p) {
        bool ok = s.exact ? (s.ai[pj] == 0) : std::abs(s.af[pj]) < 1e-6;
        note(bad2, ok, "p^j=" + std::to_string(pj));
      }
    }
  }
  rep.lines = {mult, good, bad1, bad2};
  return rep;
}

i64 deligne_check(const CoefficientSeries& s) {
  const i64 N = s.length();
  for (i64 n = 1; n <= N; ++n) {
    double bound = static_cast<double>(sigma0(n)) *
                   std::pow(static_cast<double>(n), (static_cast<double>(s.weight) - 1.0) / 2.0);
    if (std::abs(s.a(n)) > bound * (1.0 + 1e-12)) return n;
  }
  return 0;
}

double series_tail_bound(i64 T, double y, i64 weight) {
  // sum_{n>T} sigma_0(n) n^{(k-1)/2} e^{-2 pi n y} <= 2 sum_{n>T} n^{k/2} e^{-2 pi y n}
  // via sigma_0(n) <= 2 sqrt(n)
  return 2.0 * power_tail_bound(T, y, static_cast<double>(weight) / 2.0);
}

i64 series_length_for(double y, double eps, i64 weight) {
  i64 lo = 1, hi = 1;
  while (series_tail_bound(hi, y, weight) > eps) {
    hi *= 2;
    if (hi > (i64(1) << 40)) return hi;
  }
  while (lo < hi) {
    i64 mid = lo + (hi - lo) / 2;
    if (series_tail_bound(mid, y, weight) <= eps)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

FormValue evaluate_form(const CoefficientSeries& s, std::complex<double> z, double eps) {
  double y = z.imag();
  if (y <= 0) throw std::domain_error("evaluate_form: Im z must be positive");
  const i64 N = s.length();
  i64 need = series_length_for(y, eps, s.weight);
  if (need > N)
    throw TruncationError("evaluate_form: stored N = " + std::to_string(N) +
                              " cannot certify eps = " + std::to_string(eps) +
                              " at Im z = " + std::to_string(y) + " (requires N = " +
                              std::to_string(need) + ")",
                          need);
  i64 T = std::min(N, need);
  // f = sum a(n) w^n with w = e^{2 pi i z}; iterated powers, resynced every 64
  // terms to stop multiplicative drift from accumulating
  const std::complex<double> two_pi_i_z = std::complex<double>(0.0, 2.0 * std::numbers::pi) * z;
  std::complex<double> w = std::exp(two_pi_i_z);
  std::complex<double> wn = 1.0, tot = 0.0;
  for (i64 n = 1; n <= T; ++n) {
    if (n % 64 == 1) wn = std::exp(two_pi_i_z * static_cast<double>(n - 1));
    wn *= w;
    if (s.exact)
      tot += static_cast<double>(s.ai[n]) * wn;
    else
      tot += s.af[n] * wn;
    if (std::abs(wn) < 1e-320) break;
  }
  return {tot, series_tail_bound(T, y, s.weight)};
}

}  // namespace atw
