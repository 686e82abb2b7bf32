// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

// Operand generators shared by the unit and acceptance tests.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace rinv::testing {

inline double from_bits(std::uint64_t b) { return std::bit_cast<double>(b); }

/// Finite binary64 values: uniform bit patterns, values near 1, subnormals,
/// and signed zeros.
class DoubleSource {
 public:
  explicit DoubleSource(std::uint64_t seed) : rng_(seed) {}

  double any_finite() {
    for (;;) {
      const double d = from_bits(rng_());
      if (std::isfinite(d)) return d;
    }
  }

  double with_exponent(int e) {
    const std::uint64_t frac = rng_() & 0x000fffffffffffffULL;
    const std::uint64_t sign = rng_() & 0x8000000000000000ULL;
    return from_bits(sign | (static_cast<std::uint64_t>(e + 1023) << 52) | frac);
  }

  double subnormal() {
    const std::uint64_t frac = rng_() & 0x000fffffffffffffULL;
    return from_bits((rng_() & 0x8000000000000000ULL) | frac);
  }

  double moderate() { return with_exponent(static_cast<int>(rng_() % 121) - 60); }

  double next() {
    switch (rng_() % 8) {
      case 0: return subnormal();
      case 1: return (rng_() & 1) ? 0.0 : -0.0;
      case 2:
      case 3: return any_finite();
      default: return moderate();
    }
  }

  /// An operand close in magnitude to a, so the pair exercises cancellation.
  double near(double a) {
    if (a == 0 || !std::isnormal(a)) return next();
    const int e = std::ilogb(a) + static_cast<int>(rng_() % 7) - 3;
    if (e < -1022 || e > 1023) return next();
    return with_exponent(e);
  }

  std::pair<double, double> pair() {
    const double a = next();
    return {a, (rng_() % 3 == 0) ? near(a) : next()};
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// 10-bit grid s|sel(5)|m(4) embedded in binary64. sel 0 gives subnormals
/// m * 2^-1074 (including both zeros); other selectors pick an exponent and
/// a 5-bit significand 1.mmmm.
inline std::vector<double> embedded_grid() {
  static constexpr int kExponents[31] = {-1022, -1021, -1000, -969, -600, -60, -54, -53, -52, -30, -3,
                                         -2,    -1,    0,     1,    2,    3,   10,  30,  52,  53,  54,
                                         60,    100,   500,   969,  1000, 1020, 1021, 1022, 1023};
  std::vector<double> g;
  g.reserve(1024);
  for (int s = 0; s < 2; ++s) {
    for (int sel = 0; sel < 32; ++sel) {
      for (int m = 0; m < 16; ++m) {
        double v = sel == 0 ? std::ldexp(static_cast<double>(m), -1074)
                            : std::ldexp(1.0 + m / 16.0, kExponents[sel - 1]);
        g.push_back(s ? -v : v);
      }
    }
  }
  return g;
}

}  // namespace rinv::testing
