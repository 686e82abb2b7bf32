// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "rinv/fenv.hpp"

#include <cfenv>
#include <string>

#if defined(__x86_64__) || defined(_M_X64)
#include <xmmintrin.h>
#define RINV_HAS_MXCSR 1
#else
#define RINV_HAS_MXCSR 0
#endif

namespace rinv::fenv {

namespace {

int to_native(AmbientMode m) {
  switch (m) {
    case AmbientMode::RN: return FE_TONEAREST;
    case AmbientMode::RZ: return FE_TOWARDZERO;
    case AmbientMode::RD: return FE_DOWNWARD;
    case AmbientMode::RU: return FE_UPWARD;
  }
  return FE_TONEAREST;
}

}  // namespace

std::string_view to_string(AmbientMode m) {
  switch (m) {
    case AmbientMode::RN: return "RN";
    case AmbientMode::RZ: return "RZ";
    case AmbientMode::RD: return "RD";
    case AmbientMode::RU: return "RU";
  }
  return "?";
}

AmbientMode parse_mode(std::string_view text) {
  const Rounding r = parse_rounding(text);
  switch (r) {
    case Rounding::RN: return AmbientMode::RN;
    case Rounding::RZ: return AmbientMode::RZ;
    case Rounding::RD: return AmbientMode::RD;
    case Rounding::RU: return AmbientMode::RU;
    default: break;
  }
  throw std::invalid_argument("RO is not a hardware rounding mode");
}

Rounding to_rounding(AmbientMode m) {
  switch (m) {
    case AmbientMode::RN: return Rounding::RN;
    case AmbientMode::RZ: return Rounding::RZ;
    case AmbientMode::RD: return Rounding::RD;
    case AmbientMode::RU: return Rounding::RU;
  }
  return Rounding::RN;
}

AmbientMode get_mode() {
  switch (std::fegetround()) {
    case FE_TONEAREST: return AmbientMode::RN;
    case FE_TOWARDZERO: return AmbientMode::RZ;
    case FE_DOWNWARD: return AmbientMode::RD;
    case FE_UPWARD: return AmbientMode::RU;
    default: break;
  }
  throw FenvError("fegetround returned an unknown rounding mode");
}

AmbientMode set_mode(AmbientMode m) {
  const AmbientMode previous = get_mode();
  if (std::fesetround(to_native(m)) != 0) {
    throw FenvError("fesetround refused mode " + std::string(to_string(m)));
  }
  return previous;
}

bool has_fast_set_mode() { return RINV_HAS_MXCSR != 0; }

#if RINV_HAS_MXCSR
void fast_set_mode(AmbientMode m) {
  static constexpr unsigned kField[] = {_MM_ROUND_NEAREST, _MM_ROUND_TOWARD_ZERO, _MM_ROUND_DOWN,
                                        _MM_ROUND_UP};
  const unsigned csr = _mm_getcsr();
  _mm_setcsr((csr & ~static_cast<unsigned>(_MM_ROUND_MASK)) |
             kField[static_cast<int>(m)]);
}

AmbientMode fast_get_mode() {
  switch (_mm_getcsr() & _MM_ROUND_MASK) {
    case _MM_ROUND_NEAREST: return AmbientMode::RN;
    case _MM_ROUND_TOWARD_ZERO: return AmbientMode::RZ;
    case _MM_ROUND_DOWN: return AmbientMode::RD;
    default: return AmbientMode::RU;
  }
}
#else
void fast_set_mode(AmbientMode) {
  throw FenvError("fast_set_mode is only available on x86-64");
}

AmbientMode fast_get_mode() {
  throw FenvError("fast_get_mode is only available on x86-64");
}
#endif

AmbientMode probe_mode() {
  const double tiny = opaque(0x1p-60);
  const double one = opaque(1.0);
  const double up = opaque(one + tiny);
  const double down = opaque(-one - tiny);
  const bool pos_rounded_up = up != 1.0;
  const bool neg_rounded_away = down != -1.0;
  if (pos_rounded_up) return AmbientMode::RU;
  if (neg_rounded_away) return AmbientMode::RD;
  // RN and RZ agree on both probes above; a tie-free midpoint separates them.
  const double big = opaque(1.0 + 0x1p-52);
  const double third = opaque(0x1.8p-53);  // 0.75 ulp(1): RN rounds up, RZ down
  return opaque(big + third) != big ? AmbientMode::RN : AmbientMode::RZ;
}

}  // namespace rinv::fenv
