// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Control of the calling thread's floating-point rounding mode. Used only
// by tests and benchmarks: the kernels themselves never touch the FP
// environment.
//
// The FP environment is per-thread state with a single owner. Nothing here
// is safe against concurrent mode changes from within one thread (signal
// handlers, coroutines sharing a thread); different threads may hold
// different modes at the same time.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <utility>

#include "rinv/softfloat.hpp"

namespace rinv::fenv {

enum class AmbientMode : std::uint8_t { RN, RZ, RD, RU };

inline constexpr std::array<AmbientMode, 4> kAllModes{AmbientMode::RN, AmbientMode::RZ,
                                                      AmbientMode::RD, AmbientMode::RU};

std::string_view to_string(AmbientMode m);
AmbientMode parse_mode(std::string_view text);
Rounding to_rounding(AmbientMode m);

class FenvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

AmbientMode get_mode();
/// Sets the thread's rounding mode and returns the previous one. Throws
/// FenvError if the platform refuses.
AmbientMode set_mode(AmbientMode m);

/// Saves the current mode, switches to `m`, restores on destruction.
class ModeGuard {
 public:
  explicit ModeGuard(AmbientMode m) : previous_(set_mode(m)) {}
  ~ModeGuard() { set_mode(previous_); }
  ModeGuard(const ModeGuard&) = delete;
  ModeGuard& operator=(const ModeGuard&) = delete;

 private:
  AmbientMode previous_;
};

template <class Body>
decltype(auto) with_mode(AmbientMode m, Body&& body) {
  ModeGuard guard(m);
  return std::forward<Body>(body)();
}

/// Writes only the SSE rounding field (stmxcsr/ldmxcsr). x87 state is left
/// alone, so only SSE arithmetic observes the change. x86-64 only.
bool has_fast_set_mode();
void fast_set_mode(AmbientMode m);
AmbientMode fast_get_mode();

/// Compiler barrier: the value is treated as unknown and must be
/// materialized, so arithmetic on it cannot be folded or moved across a
/// rounding-mode change.
inline double opaque(double v) {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  asm volatile("" : "+x"(v));
#elif defined(__GNUC__)
  asm volatile("" : "+r"(v));
#else
  volatile double keep = v;
  v = keep;
#endif
  return v;
}

/// Mode actually in effect, found by observing 1 + 2^-60 and -1 - 2^-60.
AmbientMode probe_mode();

}  // namespace rinv::fenv
