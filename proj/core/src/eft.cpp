// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "rinv/eft.hpp"

#include <cfenv>

namespace rinv::eft {

namespace {

Rounding current_rounding() {
  switch (std::fegetround()) {
    case FE_TOWARDZERO: return Rounding::RZ;
    case FE_DOWNWARD: return Rounding::RD;
    case FE_UPWARD: return Rounding::RU;
    default: return Rounding::RN;
  }
}

}  // namespace

double soft_fma(double a, double b, double c) { return fma64(a, b, c, current_rounding()); }

}  // namespace rinv::eft
