// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rinv/bigrational.hpp"
#include "rinv/softfloat.hpp"

namespace rinv {

enum class Function : std::uint8_t { Exp2, Log2 };

std::string_view to_string(Function fn);
Function parse_function(std::string_view text);

/// Closed rational interval guaranteed to contain a real value.
struct RationalInterval {
  BigRational lo;
  BigRational hi;

  BigRational width() const { return hi - lo; }
  bool contains(const BigRational& r) const { return lo <= r && r <= hi; }
};

/// Binary64 bounds [l, h] (bit patterns). Every binary64 w with l <= w <= h
/// round-to-odd rounds to the oracle result in the wider format.
struct RoundingInterval {
  std::uint64_t lo;
  std::uint64_t hi;

  double lo_value() const;
  double hi_value() const;
  bool is_degenerate() const { return lo == hi; }
  bool contains(double w) const { return lo_value() <= w && w <= hi_value(); }
};

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Working precision ceiling for enclosure refinement, in fraction bits.
inline constexpr long kOraclePrecisionCap = 4096;

namespace oracle {

/// Enclosure of fn(x) at `fraction_bits` of working precision on the reduced
/// quantity (2^frac for exp2, log2 of the mantissa for log2). Exact results
/// come back as a degenerate interval.
RationalInterval enclose(Function fn, const BigRational& x, long fraction_bits);

/// Enclosure of fn(x) narrower than `target_gap`. Throws std::domain_error
/// outside the domain, OracleError when the precision cap is reached.
RationalInterval eval_fn(Function fn, const BigRational& x, const BigRational& target_gap);

/// fn(x) exactly, when it is rational (exp2 at integers, log2 at powers of
/// two).
std::optional<BigRational> exact_value(Function fn, const BigRational& x);

/// Result for inputs outside the finite domain (NaN, infinities, log2 of
/// zero or negatives), as a binary64 value.
std::optional<double> special_value(Function fn, const SoftValue& x);

/// fn(x) rounded into `out` with `mode`, refining the enclosure until the
/// rounding is decided. Handles special inputs and exact results (an exact
/// zero result is +0).
SoftValue correctly_rounded(Function fn, const SoftValue& x, FloatFormat out, Rounding mode);

/// Round-to-odd result in the format with two extra significand bits.
SoftValue oracle_ro(Function fn, const SoftValue& x);

/// Binary64 rounding interval of a finite round-to-odd result.
RoundingInterval rounding_interval(const SoftValue& ro_value);

/// Caches an enclosure of fn(x) and answers correctly rounded queries for
/// many target formats and modes.
class Reference {
 public:
  Reference(Function fn, const SoftValue& x);
  SoftValue rounded(FloatFormat out, Rounding mode);

 private:
  Function fn_;
  SoftValue x_;
  std::optional<double> special_;
  std::optional<BigRational> exact_;
  BigRational input_;
  long precision_ = 96;
  RationalInterval enclosure_;
};

}  // namespace oracle

/// One line of the interval file.
struct IntervalRecord {
  std::uint64_t input;
  std::uint64_t lo;  // binary64 bits
  std::uint64_t hi;
};

/// Oracle output for every bit pattern of an input format. Inputs whose
/// result is not finite (NaN, infinities) carry lo == hi == that value.
struct IntervalFile {
  Function fn;
  FloatFormat format;
  int ro_bits;
  std::vector<IntervalRecord> records;
};

/// Computes oracle intervals for all 2^n inputs of `format`, sharded over
/// `workers` threads; records are in input bit-pattern order.
IntervalFile generate_intervals(Function fn, FloatFormat format, unsigned workers);

void write_interval_file(std::ostream& os, const IntervalFile& file);
IntervalFile read_interval_file(std::istream& is);

/// Binary64 neighbors (nextUp / nextDown).
double next_up(double x);
double next_down(double x);

}  // namespace rinv
