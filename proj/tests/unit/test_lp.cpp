// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"
#include "rinv/lp.hpp"

using namespace rinv;

namespace {

bool satisfies(const lp::Problem& p, const std::vector<BigRational>& x) {
  for (const lp::Row& r : p.rows) {
    BigRational s(0);
    for (std::size_t j = 0; j < p.num_vars; ++j) s += r.coefficients[j] * x[j];
    if (s < r.lo || s > r.hi) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("two-variable system") {
  // 1 <= a + b <= 2, 0 <= a - b <= 1/2, b >= 1/4
  lp::Problem p{2, {{{1, 1}, 1, 2}, {{1, -1}, 0, BigRational(1, 2)}, {{0, 1}, BigRational(1, 4), 100}}};
  const auto x = lp::solve(p);
  REQUIRE(x.has_value());
  CHECK(satisfies(p, *x));
}

TEST_CASE("infeasible system") {
  lp::Problem p{2, {{{1, 1}, 3, 4}, {{1, 0}, 0, 1}, {{0, 1}, 0, 1}}};
  CHECK(!lp::solve(p).has_value());
  lp::Solver s(1);
  s.add_row({mpq_class(1)}, 2, 1);
  CHECK(!s.check());
}

TEST_CASE("random systems around a known point") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    std::vector<mpq_class> point(n);
    for (auto& v : point) v = mpq_class(static_cast<long>(rng() % 2001) - 1000, 1 + rng() % 97);
    lp::Problem p{n, {}};
    const std::size_t rows = n + rng() % (3 * n + 1);
    for (std::size_t i = 0; i < rows; ++i) {
      lp::Row r;
      mpq_class s = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const mpq_class c(static_cast<long>(rng() % 41) - 20, 1 + rng() % 5);
        r.coefficients.emplace_back(c);
        s += c * point[j];
      }
      r.lo = BigRational(mpq_class(s - mpq_class(rng() % 4, 7)));
      r.hi = BigRational(mpq_class(s + mpq_class(rng() % 4, 11)));
      p.rows.push_back(r);
    }
    const auto x = lp::solve(p);
    REQUIRE(x.has_value());
    CHECK(satisfies(p, *x));
  }
}

TEST_CASE("incremental tightening") {
  lp::Solver s(2);
  const std::size_t r0 = s.add_row({mpq_class(1), mpq_class(1)}, 0, 10);
  const std::size_t r1 = s.add_row({mpq_class(1), mpq_class(-1)}, -10, 10);
  REQUIRE(s.check());
  s.set_bounds(r0, 4, 4);
  s.set_bounds(r1, 2, 2);
  REQUIRE(s.check());
  const auto x = s.solution();
  CHECK(x[0] == 3);
  CHECK(x[1] == 1);
  CHECK(s.lower(r0) == 4);
  s.add_row({mpq_class(1), mpq_class(0)}, 5, 6);
  CHECK(!s.check());
  CHECK(s.num_rows() == 3);
}

TEST_CASE("hand-checkable constraint systems") {
  // 1 <= c0 <= 2 at x = 0 and 3 <= c0 + c1 <= 4 at x = 1.
  lp::Problem p{2, {{{1, 0}, 1, 2}, {{1, 1}, 3, 4}}};
  const auto x = lp::solve(p);
  REQUIRE(x.has_value());
  CHECK(satisfies(p, *x));
  lp::Problem q{1, {{{1}, -100, 1}, {{1}, 2, 100}}};
  CHECK(!lp::solve(q).has_value());
}
