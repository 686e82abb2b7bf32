// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Error-free transformations over native binary64 that produce round-to-zero
// (and round-down / round-up) results under whatever rounding mode the
// calling thread currently has. Nothing here reads or writes the FP
// environment explicitly; the host arithmetic simply runs in the ambient
// mode and the residual tests below correct the result.
//
// Preconditions shared by every function: finite operands and a result that
// does not overflow under any rounding mode.

#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "rinv/softfloat.hpp"

#ifndef RINV_HAVE_HW_FMA
#define RINV_HAVE_HW_FMA 0
#endif

namespace rinv::eft {

inline constexpr std::uint64_t kSignBit = 0x8000000000000000ULL;

inline std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }
inline double from_bits(std::uint64_t b) { return std::bit_cast<double>(b); }

/// Fused multiply-add computed in software: exact a*b+c, rounded once in the
/// thread's current rounding mode.
double soft_fma(double a, double b, double c);

/// Single-rounding fma under the ambient mode. Hardware when the build probe
/// found it, otherwise soft_fma.
inline double fused_multiply_add(double a, double b, double c) {
#if RINV_HAVE_HW_FMA
  return __builtin_fma(a, b, c);
#else
  return soft_fma(a, b, c);
#endif
}

/// True when fused_multiply_add maps to a hardware instruction.
constexpr bool has_hardware_fma() { return RINV_HAVE_HW_FMA != 0; }

struct TwoSum {
  double sum;
  double error;
};

/// Dekker's FastTwoSum with the operand swap done internally. `sum` is the
/// ambient-mode sum and `error` a faithful rounding of a + b - sum (exact
/// under RN).
inline TwoSum fast_two_sum(double a, double b) {
  const double s = a + b;
  if (std::fabs(b) > std::fabs(a)) std::swap(a, b);
  const double z = s - a;
  const double t = b - z;
  return {s, t};
}

/// a + b rounded toward zero.
inline double rza(double a, double b) {
  if ((bits(a) ^ bits(b)) == kSignBit) return 0.0;
  auto [s, t] = fast_two_sum(a, b);
  if ((bits(t) << 1) != 0 && (bits(t) ^ bits(s)) >= kSignBit) s = from_bits(bits(s) - 1);
  return s;
}

/// a * b rounded toward zero. The residual test compares the bit patterns of
/// the two fma residuals so that an underflowing rounding error is still
/// detected.
inline double rzm(double a, double b) {
  double m = a * b;
  const double c1 = fused_multiply_add(a, b, -m);
  const double c2 = fused_multiply_add(-a, b, m);
  if (bits(c1) != bits(c2) && (bits(c1) ^ bits(m)) >= kSignBit) m = from_bits(bits(m) - 1);
  return m;
}

enum class Direction : std::uint8_t { Down, Up };

/// Next binary64 toward -inf (Down) or +inf (Up). Zeros step to the
/// smallest subnormal of the matching sign.
inline double step(double s, Direction dir) {
  const std::uint64_t b = bits(s);
  if ((b << 1) == 0) {
    assert(false && "directed step off a zero");
    return dir == Direction::Down ? -from_bits(1) : from_bits(1);
  }
  const bool negative = (b >> 63) != 0;
  if (dir == Direction::Down) return from_bits(negative ? b + 1 : b - 1);
  return from_bits(negative ? b - 1 : b + 1);
}

/// a + b rounded toward -inf (Down) or +inf (Up).
inline double add_dir(double a, double b, Direction dir) {
  if ((bits(a) ^ bits(b)) == kSignBit) return dir == Direction::Down ? -0.0 : 0.0;
  auto [s, t] = fast_two_sum(a, b);
  if ((bits(t) << 1) != 0) {
    const bool below = (bits(t) >> 63) != 0;  // exact sum < s
    if (below == (dir == Direction::Down)) s = step(s, dir);
  }
  return s;
}

/// a * b rounded toward -inf (Down) or +inf (Up).
inline double mul_dir(double a, double b, Direction dir) {
  double m = a * b;
  const double c1 = fused_multiply_add(a, b, -m);
  const double c2 = fused_multiply_add(-a, b, m);
  if (bits(c1) != bits(c2)) {
    const bool below = (bits(c1) >> 63) != 0;  // exact product < m
    if (below == (dir == Direction::Down)) {
      const std::uint64_t mb = bits(m);
      // Stepping away from a zero product is legal here: a tiny nonzero
      // product can round to zero in the ambient mode.
      if ((mb << 1) == 0) {
        m = dir == Direction::Down ? -from_bits(1) : from_bits(1);
      } else {
        m = step(m, dir);
      }
    }
  }
  return m;
}

/// Directed/RZ addition by rounding function; RN and RO are not emulated.
inline double add_rounded(double a, double b, Rounding mode) {
  switch (mode) {
    case Rounding::RZ: return rza(a, b);
    case Rounding::RD: return add_dir(a, b, Direction::Down);
    case Rounding::RU: return add_dir(a, b, Direction::Up);
    default: throw std::invalid_argument("add_rounded: only RZ, RD and RU are emulated");
  }
}

inline double mul_rounded(double a, double b, Rounding mode) {
  switch (mode) {
    case Rounding::RZ: return rzm(a, b);
    case Rounding::RD: return mul_dir(a, b, Direction::Down);
    case Rounding::RU: return mul_dir(a, b, Direction::Up);
    default: throw std::invalid_argument("mul_rounded: only RZ, RD and RU are emulated");
  }
}

}  // namespace rinv::eft
