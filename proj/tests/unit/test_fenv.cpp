// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include <cfenv>

#include "doctest.h"
#include "rinv/fenv.hpp"

using namespace rinv;

TEST_CASE("set and get the ambient mode") {
  for (fenv::AmbientMode m : fenv::kAllModes) {
    const fenv::AmbientMode prev = fenv::set_mode(m);
    CHECK(fenv::get_mode() == m);
    CHECK(fenv::probe_mode() == m);
    fenv::set_mode(prev);
  }
  CHECK(fenv::get_mode() == fenv::AmbientMode::RN);
}

TEST_CASE("guard restores the previous mode") {
  {
    fenv::ModeGuard g(fenv::AmbientMode::RD);
    CHECK(std::fegetround() == FE_DOWNWARD);
    {
      fenv::ModeGuard inner(fenv::AmbientMode::RU);
      CHECK(fenv::probe_mode() == fenv::AmbientMode::RU);
    }
    CHECK(fenv::probe_mode() == fenv::AmbientMode::RD);
  }
  CHECK(fenv::probe_mode() == fenv::AmbientMode::RN);
}

TEST_CASE("with_mode runs the body under the mode") {
  const double third = fenv::with_mode(fenv::AmbientMode::RU, [] { return fenv::opaque(1.0) / fenv::opaque(3.0); });
  const double third_dn = fenv::with_mode(fenv::AmbientMode::RD, [] { return fenv::opaque(1.0) / fenv::opaque(3.0); });
  CHECK(third > third_dn);
  CHECK(fenv::get_mode() == fenv::AmbientMode::RN);
  CHECK_THROWS(fenv::with_mode(fenv::AmbientMode::RZ, []() -> int { throw std::runtime_error("x"); }));
  CHECK(fenv::get_mode() == fenv::AmbientMode::RN);
}

TEST_CASE("fast mode switch agrees with the standard one") {
  if (!fenv::has_fast_set_mode()) return;
  for (fenv::AmbientMode m : fenv::kAllModes) {
    fenv::fast_set_mode(m);
    CHECK(fenv::fast_get_mode() == m);
    CHECK(fenv::probe_mode() == m);
  }
  fenv::fast_set_mode(fenv::AmbientMode::RN);
  CHECK(fenv::get_mode() == fenv::AmbientMode::RN);
}

TEST_CASE("mode names") {
  for (fenv::AmbientMode m : fenv::kAllModes) CHECK(fenv::parse_mode(fenv::to_string(m)) == m);
  CHECK_THROWS(fenv::parse_mode("nearest-ish"));
}
