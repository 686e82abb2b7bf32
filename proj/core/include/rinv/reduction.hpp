// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

#include "rinv/bounds.hpp"
#include "rinv/eft.hpp"
#include "rinv/oracle.hpp"

namespace rinv {

/// Range reduction and output compensation scheme.
///   exp2-split:   x = N + r, x' = r in [0, 1), OC(y') = y' * 2^N
///   log2-center:  x = 2^k * m; x' = m - 1 with OC(y') = y' + k when
///                 m < sqrt(2), else x' = m/2 - 1 with OC(y') = y' + (k + 1)
enum class ReductionKind : std::uint8_t { Exp2Split, Log2Center };

std::string_view to_string(ReductionKind k);
ReductionKind parse_reduction(std::string_view text);
ReductionKind default_reduction(Function fn);

struct Reduced {
  double x_prime;
  double param;  // 2^N or the integer added back
};

/// Single-operation OC program: y' * P0 or y' + P0.
ExprProgram oc_program(ReductionKind k);

struct Log2Split {
  std::int64_t k;
  double m;  // in [1, 2)
};

/// x = 2^k * m for a positive normal binary64 x, read off the encoding.
inline Log2Split log2_split(double x) {
  const std::uint64_t b = std::bit_cast<std::uint64_t>(x);
  return {static_cast<std::int64_t>((b >> 52) & 0x7ff) - 1023,
          std::bit_cast<double>((b & 0x000fffffffffffffULL) | 0x3ff0000000000000ULL)};
}

/// Reduction of a finite in-domain binary64 x. Rounding-sensitive steps go
/// through rza/rzm so the result does not depend on the ambient mode.
inline Reduced range_reduce(ReductionKind kind, double x) {
  if (kind == ReductionKind::Exp2Split) {
    const double n = std::floor(x);
    const double r = eft::rza(x, -n);
    const auto e = static_cast<std::int64_t>(n);
    return {r, std::bit_cast<double>(static_cast<std::uint64_t>(e + 1023) << 52)};
  }
  const auto [k, m] = log2_split(x);
  // m >= sqrt(2) iff m * m >= 2; m has few significant bits so m * m is exact.
  if (eft::rzm(m, m) >= 2.0) {
    return {eft::rza(eft::rzm(m, 0.5), -1.0), static_cast<double>(k + 1)};
  }
  return {eft::rza(m, -1.0), static_cast<double>(k)};
}

/// Whether range_reduce applies to x and is exact for it: x must be a
/// normal binary64, 2^N must be a normal binary64, and x' plus the
/// parameter must reconstruct x in exact arithmetic.
bool reduction_applies(ReductionKind kind, double x);

}  // namespace rinv
