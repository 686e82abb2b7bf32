// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "rinv/bigrational.hpp"

namespace rinv {

/// Rounding functions. RO is round-to-odd: exact values are returned
/// unchanged, anything else goes to the neighbor with an odd significand.
enum class Rounding : std::uint8_t { RN, RZ, RD, RU, RO };

inline constexpr std::array<Rounding, 4> kStandardRoundings{Rounding::RN, Rounding::RZ,
                                                            Rounding::RD, Rounding::RU};

std::string_view to_string(Rounding mode);
Rounding parse_rounding(std::string_view text);

/// Parametric IEEE-754 style binary format: 1 sign bit, `exponent_bits`
/// exponent bits and `precision - 1` stored fraction bits. Subnormals,
/// signed zeros, infinities and NaN follow the IEEE layout.
class FloatFormat {
 public:
  FloatFormat(int exponent_bits, int precision);

  static FloatFormat binary64() { return {11, 53}; }
  static FloatFormat binary32() { return {8, 24}; }
  static FloatFormat binary16() { return {5, 11}; }

  /// Parses "e5 m11" (also accepts "e5m11").
  static FloatFormat parse(std::string_view text);

  int exponent_bits() const { return exponent_bits_; }
  int precision() const { return precision_; }
  int fraction_bits() const { return precision_ - 1; }
  int total_bits() const { return exponent_bits_ + precision_; }
  int bias() const { return (1 << (exponent_bits_ - 1)) - 1; }
  int e_max() const { return bias(); }
  int e_min() const { return 1 - bias(); }
  int hex_width() const { return (total_bits() + 3) / 4; }

  std::uint64_t sign_mask() const { return std::uint64_t{1} << (total_bits() - 1); }
  std::uint64_t fraction_mask() const { return (std::uint64_t{1} << fraction_bits()) - 1; }
  std::uint64_t exponent_field_max() const { return (std::uint64_t{1} << exponent_bits_) - 1; }
  std::uint64_t magnitude_mask() const { return sign_mask() - 1; }
  std::uint64_t all_bits_mask() const {
    return total_bits() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << total_bits()) - 1;
  }

  /// Same exponent width with `extra` more significand bits.
  FloatFormat widened(int extra) const { return {exponent_bits_, precision_ + extra}; }
  /// Every finite value of this format is exactly a binary64 value.
  bool embeds_in_binary64() const;

  std::string to_string() const;

  friend bool operator==(const FloatFormat&, const FloatFormat&) = default;

 private:
  int exponent_bits_;
  int precision_;
};

/// A bit pattern of a FloatFormat.
class SoftValue {
 public:
  SoftValue(FloatFormat format, std::uint64_t bits);

  static SoftValue zero(FloatFormat f, bool negative = false);
  static SoftValue infinity(FloatFormat f, bool negative = false);
  /// The one canonical quiet NaN (zero payload, quiet bit set).
  static SoftValue nan(FloatFormat f);
  static SoftValue max_finite(FloatFormat f, bool negative = false);
  static SoftValue min_subnormal(FloatFormat f, bool negative = false);
  /// Parses a fixed-width hex bit pattern.
  static SoftValue from_hex(FloatFormat f, std::string_view hex);

  const FloatFormat& format() const { return format_; }
  std::uint64_t bits() const { return bits_; }

  bool is_negative() const { return (bits_ & format_.sign_mask()) != 0; }
  std::uint64_t biased_exponent() const {
    return (bits_ >> format_.fraction_bits()) & format_.exponent_field_max();
  }
  std::uint64_t fraction() const { return bits_ & format_.fraction_mask(); }
  bool is_nan() const { return biased_exponent() == format_.exponent_field_max() && fraction() != 0; }
  bool is_inf() const { return biased_exponent() == format_.exponent_field_max() && fraction() == 0; }
  bool is_zero() const { return (bits_ & format_.magnitude_mask()) == 0; }
  bool is_finite() const { return biased_exponent() != format_.exponent_field_max(); }
  bool is_subnormal() const { return biased_exponent() == 0 && fraction() != 0; }
  /// Lowest significand bit set.
  bool is_odd() const { return (bits_ & 1) != 0; }

  /// Integer significand including the implicit bit (finite values only).
  std::uint64_t significand() const;
  /// Unbiased exponent e, using e_min for subnormals and zero.
  int exponent() const;

  SoftValue negated() const { return {format_, bits_ ^ format_.sign_mask()}; }
  SoftValue abs() const { return {format_, bits_ & format_.magnitude_mask()}; }

  std::string hex() const;

  friend bool operator==(const SoftValue&, const SoftValue&) = default;

 private:
  FloatFormat format_;
  std::uint64_t bits_;
};

std::string to_hex(std::uint64_t bits, int width);
std::uint64_t parse_hex(std::string_view hex);

enum class ValueKind : std::uint8_t { Finite, Zero, Infinity, NaN };

struct Decoded {
  ValueKind kind;
  bool negative;
  BigRational value;  // exact value for Finite, 0 for Zero
};

Decoded decode(const SoftValue& v);
/// Exact rational of a finite value (zeros map to 0). Throws on inf/NaN.
BigRational to_rational(const SoftValue& v);

/// Rounds a nonzero rational into `f`. Throws std::invalid_argument on zero.
SoftValue round(const BigRational& r, FloatFormat f, Rounding mode);
/// Rounds any binary64 value into `f` (zeros keep their sign, specials map).
SoftValue round_double(double d, FloatFormat f, Rounding mode);

/// Exact conversion to binary64; requires f.embeds_in_binary64().
double to_double(const SoftValue& v);
SoftValue from_double(double d);

/// Neighbors in the total order ..., -0 | +0, ... where both zeros share one
/// position: succ(+-0) is +min_subnormal and pred(+-0) is -min_subnormal.
/// succ(max) is +inf, pred(-max) is -inf. Stepping from an infinity toward
/// the finite range is allowed; NaN throws.
SoftValue succ(const SoftValue& v);
SoftValue pred(const SoftValue& v);

/// 2^(e - p + 1) with e = e_min for subnormals. Throws on zero, inf and NaN.
BigRational ulp(const SoftValue& v);

/// 0 for +0 and positives, 1 for -0 and negatives. Throws on NaN.
int sign(const SoftValue& v);

/// Key that is monotone in the value order; -0 and +0 both map to 0.
std::int64_t order_key(const SoftValue& v);

/// Correctly rounded arithmetic on finite operands of one format, with IEEE
/// signed-zero rules for exact-zero results.
SoftValue add(const SoftValue& a, const SoftValue& b, Rounding mode);
SoftValue mul(const SoftValue& a, const SoftValue& b, Rounding mode);
/// a*b + c with a single rounding.
SoftValue fma(const SoftValue& a, const SoftValue& b, const SoftValue& c, Rounding mode);

/// binary64 conveniences over the same engine.
double add64(double a, double b, Rounding mode);
double mul64(double a, double b, Rounding mode);
double fma64(double a, double b, double c, Rounding mode);
double round64(const BigRational& r, Rounding mode);

}  // namespace rinv
