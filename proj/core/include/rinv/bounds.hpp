// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rinv/softfloat.hpp"

namespace rinv {

/// Total order on non-NaN binary64 values with -0 < +0.
std::int64_t fp_key(double x);
inline bool fp_less(double a, double b) { return fp_key(a) < fp_key(b); }
inline bool fp_less_equal(double a, double b) { return fp_key(a) <= fp_key(b); }
double fp_min(double a, double b);
double fp_max(double a, double b);

/// Closed binary64 interval [lo, hi] in the fp_key order.
struct BoundedValue {
  double lo;
  double hi;

  static BoundedValue point(double v) { return {v, v}; }
  bool contains(double v) const { return fp_less_equal(lo, v) && fp_less_equal(v, hi); }
  /// Containment ignoring the sign of zero.
  bool contains_value(double v) const { return lo <= v && v <= hi; }
  bool is_point() const;
};

class BoundsOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Worst case over every per-operation rounding assignment of a + b / a * b.
BoundedValue bv_add(const BoundedValue& a, const BoundedValue& b);
BoundedValue bv_mul(const BoundedValue& a, const BoundedValue& b);

enum class OpKind : std::uint8_t { Add, Mul };

struct Operand {
  enum class Kind : std::uint8_t { Constant, Input, Param, Node };
  Kind kind;
  std::uint32_t index;

  friend bool operator==(const Operand&, const Operand&) = default;
};

struct Op {
  OpKind kind;
  Operand lhs;
  Operand rhs;

  friend bool operator==(const Op&, const Op&) = default;
};

/// Straight-line program of two-operand additions and multiplications over
/// binary64 constants, one input slot and per-call parameters. Each op
/// refers only to earlier ops.
class ExprProgram {
 public:
  static constexpr std::size_t kMaxOps = 32;

  Operand constant(double c);
  static Operand input() { return {Operand::Kind::Input, 0}; }
  Operand param(std::uint32_t i);
  Operand add(Operand a, Operand b) { return push(OpKind::Add, a, b); }
  Operand mul(Operand a, Operand b) { return push(OpKind::Mul, a, b); }
  void set_result(Operand r);

  const std::vector<Op>& ops() const { return ops_; }
  const std::vector<double>& constants() const { return constants_; }
  std::uint32_t param_count() const { return param_count_; }
  Operand result() const { return result_; }

  /// Replaces constant i (used when coefficients are refit in place).
  void set_constant(std::size_t i, double c) { constants_.at(i) = c; }

  /// Rebuilds a program from serialized parts, validating references.
  static ExprProgram from_parts(std::vector<double> constants, std::uint32_t param_count,
                                std::vector<Op> ops, Operand result);

  friend bool operator==(const ExprProgram& a, const ExprProgram& b);

 private:
  Operand push(OpKind kind, Operand a, Operand b);
  void check(Operand o, std::size_t limit) const;

  std::vector<double> constants_;
  std::vector<Op> ops_;
  std::uint32_t param_count_ = 0;
  Operand result_{Operand::Kind::Input, 0};
};

std::string_view to_string(OpKind k);

/// Term structure of a polynomial evaluated by Horner's scheme.
enum class PolyBasis : std::uint8_t {
  Dense,       // c0 + c1 x + ... + cd x^d
  Even,        // c0 + c1 x^2 + ... + cd x^(2d)
  Odd,         // c0 x + c1 x^3 + ... + cd x^(2d+1)
  NoConstant,  // c0 x + c1 x^2 + ... + cd x^(d+1)
};

std::string_view to_string(PolyBasis b);
PolyBasis parse_basis(std::string_view text);

/// Monomial exponent of each coefficient.
std::vector<int> basis_exponents(PolyBasis b, std::size_t coefficient_count);

/// Horner program for the coefficients; constant i holds coefficient i.
ExprProgram horner(PolyBasis basis, std::span<const double> coefficients);

/// Interval evaluation with directed rounding at every operation.
BoundedValue eval_bounds(const ExprProgram& p, const BoundedValue& input,
                         std::span<const double> params = {});
inline BoundedValue eval_bounds(const ExprProgram& p, double x_lo, double x_hi,
                                std::span<const double> params = {}) {
  return eval_bounds(p, BoundedValue{x_lo, x_hi}, params);
}

/// Point evaluation with every operation rounded by softfloat in `mode`
/// (any mode including RO).
double eval_soft(const ExprProgram& p, double x, Rounding mode, std::span<const double> params = {});

/// Point evaluation with per-operation modes; modes.size() == ops().size().
double eval_assignment(const ExprProgram& p, double x, std::span<const Rounding> modes,
                       std::span<const double> params = {});

/// Point evaluation with rza/rzm at every operation.
double eval_rz(const ExprProgram& p, double x, std::span<const double> params = {});

/// Point evaluation with native operations in the ambient rounding mode.
double eval_native(const ExprProgram& p, double x, std::span<const double> params = {});

}  // namespace rinv
