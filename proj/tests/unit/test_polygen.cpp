// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "rinv/fenv.hpp"
#include "rinv/pipeline.hpp"
#include "rinv/polygen.hpp"

using namespace rinv;

namespace {

DegreePolicy dense(int start, int max) { return {start, max, PolyBasis::Dense}; }

}  // namespace

TEST_CASE("wide intervals admit a constant") {
  std::vector<ReducedConstraint> cs;
  for (int i = 0; i < 32; ++i) cs.push_back({i / 32.0, 0.5, 2.0, static_cast<std::uint64_t>(i)});
  const GenerationResult r = generate(cs, Flavor::RIIB, dense(0, 4));
  CHECK(r.poly.degree() == 0);
  CHECK(r.poly.coefficients[0] >= 0.5);
  CHECK(r.poly.coefficients[0] <= 2.0);
  CHECK(violated_constraints(r.poly.program(), cs, Flavor::RIIB, 1).empty());
}

TEST_CASE("exact linear data") {
  std::vector<ReducedConstraint> cs;
  for (int i = 0; i < 64; ++i) {
    const double x = i / 64.0;
    cs.push_back({x, 1.0 + 2.0 * x, 1.0 + 2.0 * x, static_cast<std::uint64_t>(i)});
  }
  const GenerationResult r = generate(cs, Flavor::RIIB, dense(0, 3));
  CHECK(r.poly.degree() == 1);
  CHECK(r.poly.coefficients == std::vector<double>{1.0, 2.0});
}

TEST_CASE("narrow intervals are repaired after rounding") {
  // y = 0.1 + x / 3 within a few ulps; the exact solution is not representable.
  for (Flavor flavor : {Flavor::RIIB, Flavor::RIO, Flavor::RnOnly}) {
    std::vector<ReducedConstraint> cs;
    for (int i = 0; i < 300; ++i) {
      const double x = i / 512.0;
      const double y = 0.1 + x / 3.0;
      double lo = y, hi = y;
      for (int k = 0; k < 4; ++k) {
        lo = std::nextafter(lo, -1.0);
        hi = std::nextafter(hi, 2.0);
      }
      cs.push_back({x, lo, hi, static_cast<std::uint64_t>(i)});
    }
    const GenerationResult r = generate(cs, flavor, dense(0, 4));
    CHECK(violated_constraints(r.poly.program(), cs, flavor, 2).empty());
    CHECK(r.stats.rounds >= 1);
    CHECK(r.stats.lp_rows > 0);
  }
}

TEST_CASE("infeasible constraints name the inputs") {
  std::vector<ReducedConstraint> cs;
  for (int i = 0; i < 20; ++i) {
    const double x = i / 32.0;
    const double y = (i % 2) ? 1.0 : 2.0;  // zig-zag that no low-degree polynomial fits
    cs.push_back({x, y, y, static_cast<std::uint64_t>(i)});
  }
  try {
    (void)generate(cs, Flavor::RIIB, dense(0, 2));
    FAIL("expected Ungeneratable");
  } catch (const Ungeneratable& e) {
    CHECK(!e.inputs().empty());
  }
}

TEST_CASE("default start degree") {
  CHECK(default_start_degree(FloatFormat(5, 5)) == 3);
  CHECK(default_start_degree(FloatFormat(5, 9)) == 5);
}

TEST_CASE("generated exp2 kernel holds under every ambient mode") {
  const FloatFormat f(5, 5);
  const IntervalFile oracle = generate_intervals(Function::Exp2, f, 2);
  const ConstraintFile cf = generate_constraints(oracle, Flavor::RIIB, 2);
  const DegreePolicy policy = resolve_policy(Function::Exp2, f, DegreePolicy{});
  const GenerationResult r = generate(cf.constraints, Flavor::RIIB, policy, 2);
  const ExprProgram p = r.poly.program();
  for (const ReducedConstraint& c : cf.constraints) {
    for (fenv::AmbientMode m : fenv::kAllModes) {
      const double y = fenv::with_mode(m, [&] { return eval_native(p, fenv::opaque(c.x_prime)); });
      CHECK(c.l_prime <= y);
      CHECK(y <= c.h_prime);
    }
  }
  CHECK(r.poly.basis == PolyBasis::Dense);
  CHECK(r.stats.degree == r.poly.degree());
}
