#pragma once

// Sources of newform Fourier coefficients a(n): exact eta-quotient expansion
// (Euler's pentagonal-number series, exact int64 power-series arithmetic),
// text-file ingestion, Hecke-relation validation, and certified evaluation of
// f(z) on the upper half-plane.
//
// Coefficient file format (line-oriented):
//   # newform <label>
//   level <q>
//   weight <k>
//   [character <modulus> <index>]
//   coeffs
//   <n> <a_n>            n strictly increasing from 1, contiguous
// Unknown '#'-prefixed lines are ignored.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atwist/arith.hpp"

namespace atw {

struct CoefficientSeries {
  std::string label;
  i64 level = 1;
  i64 weight = 2;
  bool exact = true;  // ai valid; otherwise af valid
  std::vector<i64> ai;    // a(n) at index n (index 0 unused)
  std::vector<double> af;
  bool normalized = false;  // a(1) == 1
  // optional nebentypus tag carried by imported twist data: (modulus, index)
  std::optional<std::pair<i64, i64>> character;

  i64 length() const { return static_cast<i64>((exact ? ai.size() : af.size())) - 1; }
  double a(i64 n) const { return exact ? static_cast<double>(ai[n]) : af[n]; }
};

struct EtaQuotientSpec {
  std::vector<std::pair<i64, i64>> components;  // (multiplier m, exponent e)
  i64 level = 1;

  i64 weight_times_two() const;
  i64 offset_numerator() const;  // sum m*e (must be 0 mod 24)
  void validate() const;         // throws std::invalid_argument
  std::string label() const;
};

// exact integer coefficients of prod_m eta(m z)^{e_m}, indexed so that index n
// carries the coefficient of e^{2 pi i n z}
CoefficientSeries eta_quotient_coeffs(const EtaQuotientSpec& spec, i64 N);

// bundled test forms
EtaQuotientSpec eta_spec_level11();  // eta(z)^2 eta(11z)^2
EtaQuotientSpec eta_spec_level27();  // eta(3z)^2 eta(9z)^2

CoefficientSeries load_coeffs(const std::string& path);
void save_coeffs(const CoefficientSeries& s, const std::string& path);

struct HeckeReport {
  struct Line {
    std::string relation;
    i64 checked = 0;
    i64 failed = 0;
    std::string first_failure;
  };
  std::vector<Line> lines;
  bool all_pass() const;
  std::string summary() const;
};

HeckeReport verify_hecke(const CoefficientSeries& s);
// Deligne bound |a(n)| <= sigma_0(n) n^{(k-1)/2}; returns first violating n or 0
i64 deligne_check(const CoefficientSeries& s);

struct FormValue {
  std::complex<double> value;
  double tail_bound;  // certified truncation error actually achieved
};

// f(z) by the q-expansion with a certified tail bound; throws
// TruncationError (std::runtime_error) naming the required N when the stored
// length cannot reach eps at Im z.
FormValue evaluate_form(const CoefficientSeries& s, std::complex<double> z, double eps);

// certified bound on sum_{n > T} sigma_0(n) n^{(k-1)/2} e^{-2 pi n y}, via
// sigma_0(n) <= 2 sqrt(n) and geometric sums (k = 2: sum 2 n e^{-2 pi n y})
double series_tail_bound(i64 T, double y, i64 weight);
// smallest T making series_tail_bound(T, y, k) <= eps
i64 series_length_for(double y, double eps, i64 weight);

class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, i64 required_n)
      : std::runtime_error(what), required_n(required_n) {}
  i64 required_n;
};

}  // namespace atw
