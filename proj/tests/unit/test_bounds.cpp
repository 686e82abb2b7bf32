// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "rinv/bounds.hpp"
#include "rinv/fenv.hpp"

using namespace rinv;

namespace {

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

// Straightforward walk over the program with one rounding per op.
double walk(const ExprProgram& p, double x, const std::vector<Rounding>& modes) {
  std::vector<double> nodes;
  auto get = [&](Operand o) {
    switch (o.kind) {
      case Operand::Kind::Constant: return p.constants()[o.index];
      case Operand::Kind::Input: return x;
      case Operand::Kind::Node: return nodes[o.index];
      default: throw std::logic_error("params unused here");
    }
  };
  for (std::size_t i = 0; i < p.ops().size(); ++i) {
    const Op& op = p.ops()[i];
    const double a = get(op.lhs), b = get(op.rhs);
    nodes.push_back(op.kind == OpKind::Add ? add64(a, b, modes[i]) : mul64(a, b, modes[i]));
  }
  return get(p.result());
}

// Minimum and maximum (in fp order) over all 4^ops rounding assignments.
std::pair<double, double> enumerate(const ExprProgram& p, double x) {
  const std::size_t n = p.ops().size();
  std::vector<Rounding> modes(n, Rounding::RN);
  double lo = NAN, hi = NAN;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 4;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i, c /= 4) modes[i] = kStandardRoundings[c % 4];
    const double v = walk(p, x, modes);
    if (code == 0 || fp_less(v, lo)) lo = v;
    if (code == 0 || fp_less(hi, v)) hi = v;
  }
  return {lo, hi};
}

}  // namespace

TEST_CASE("fp order puts negative zero below positive zero") {
  CHECK(fp_less(-0.0, 0.0));
  CHECK(fp_less(-1.0, -0.0));
  CHECK(fp_less(0.0, 0x1p-1074));
  CHECK(same_bits(fp_min(0.0, -0.0), -0.0));
  CHECK(same_bits(fp_max(0.0, -0.0), 0.0));
  CHECK(fp_key(1.0) < fp_key(std::nextafter(1.0, 2.0)));
}

TEST_CASE("interval addition") {
  const BoundedValue s = bv_add(BoundedValue::point(1.0), BoundedValue::point(0x1p-60));
  CHECK(s.lo == 1.0);
  CHECK(s.hi == 1.0 + 0x1p-52);
  const BoundedValue z = bv_add(BoundedValue::point(1.0), BoundedValue::point(-1.0));
  CHECK(same_bits(z.lo, -0.0));
  CHECK(same_bits(z.hi, 0.0));
  const BoundedValue w = bv_add({1.0, 2.0}, {-3.0, 0.5});
  CHECK(w.lo == -2.0);
  CHECK(w.hi == 2.5);
  CHECK(BoundedValue::point(3.0).is_point());
}

TEST_CASE("interval multiplication") {
  const BoundedValue p = bv_mul({-2.0, 3.0}, {-5.0, 7.0});
  CHECK(p.lo == -15.0);
  CHECK(p.hi == 21.0);
  const BoundedValue q = bv_mul({2.0, 3.0}, {5.0, 7.0});
  CHECK(q.lo == 10.0);
  CHECK(q.hi == 21.0);
  const BoundedValue t = bv_mul(BoundedValue::point(1.0 / 3.0), BoundedValue::point(3.0));
  CHECK(t.lo == std::nextafter(1.0, 0.0));
  CHECK(t.hi == 1.0);
  const BoundedValue z = bv_mul(BoundedValue::point(-0.0), {2.0, 3.0});
  CHECK(same_bits(z.lo, -0.0));
  CHECK(same_bits(z.hi, -0.0));
  const BoundedValue tiny = bv_mul(BoundedValue::point(0x1p-600), BoundedValue::point(-0x1p-600));
  CHECK(tiny.lo == -0x1p-1074);
  CHECK(same_bits(tiny.hi, -0.0));
  CHECK_THROWS_AS(bv_mul(BoundedValue::point(0x1p600), BoundedValue::point(0x1p600)), BoundsOverflow);
}

TEST_CASE("horner programs") {
  const std::vector<double> c{1.0, 2.0, 3.0};
  CHECK(eval_soft(horner(PolyBasis::Dense, c), 2.0, Rounding::RN) == 17.0);
  CHECK(eval_soft(horner(PolyBasis::Even, c), 2.0, Rounding::RN) == 57.0);
  CHECK(eval_soft(horner(PolyBasis::Odd, c), 2.0, Rounding::RN) == 114.0);
  CHECK(eval_soft(horner(PolyBasis::NoConstant, c), 2.0, Rounding::RN) == 34.0);
  CHECK(horner(PolyBasis::Dense, c).ops().size() == 4);
  CHECK(basis_exponents(PolyBasis::Odd, 3) == std::vector<int>{1, 3, 5});
  CHECK(basis_exponents(PolyBasis::NoConstant, 2) == std::vector<int>{1, 2});
  for (PolyBasis b : {PolyBasis::Dense, PolyBasis::Even, PolyBasis::Odd, PolyBasis::NoConstant}) {
    CHECK(parse_basis(to_string(b)) == b);
  }
  CHECK_THROWS(parse_basis("chebyshev"));
}

TEST_CASE("degree-one horner bounds are tight over all assignments") {
  std::mt19937_64 rng(21);
  testing::DoubleSource src(22);
  for (int i = 0; i < 3000; ++i) {
    const std::vector<double> c{src.moderate(), src.moderate()};
    const ExprProgram p = horner(PolyBasis::Dense, c);
    const double x = src.moderate();
    const auto [lo, hi] = enumerate(p, x);
    const BoundedValue b = eval_bounds(p, x, x);
    INFO(std::hexfloat << c[0] << " " << c[1] << " x=" << x);
    CHECK(same_bits(b.lo, lo));
    CHECK(same_bits(b.hi, hi));
  }
}

TEST_CASE("degree-three horner bounds are tight") {
  testing::DoubleSource src(23);
  for (int i = 0; i < 400; ++i) {
    std::vector<double> c(4);
    for (double& v : c) v = src.moderate();
    const ExprProgram p = horner(PolyBasis::Dense, c);
    const double x = src.moderate();
    const auto [lo, hi] = enumerate(p, x);
    const BoundedValue b = eval_bounds(p, x, x);
    CHECK(same_bits(b.lo, lo));
    CHECK(same_bits(b.hi, hi));
  }
}

TEST_CASE("bounds contain every ambient-mode evaluation") {
  testing::DoubleSource src(24);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> c(5);
    for (double& v : c) v = src.moderate();
    const ExprProgram p = horner(PolyBasis::Dense, c);
    const double x = src.moderate();
    const BoundedValue b = eval_bounds(p, x, x);
    for (fenv::AmbientMode m : fenv::kAllModes) {
      const double native = fenv::with_mode(m, [&] { return eval_native(p, fenv::opaque(x)); });
      CHECK(b.contains(native));
      CHECK(same_bits(native, eval_soft(p, x, fenv::to_rounding(m))));
    }
    CHECK(b.contains(eval_rz(p, x)));
  }
}

TEST_CASE("bounds grow with the input interval") {
  const std::vector<double> c{0.25, -1.5, 0.75};
  const ExprProgram p = horner(PolyBasis::Dense, c);
  for (double x = -2.0; x <= 2.0; x += 0.125) {
    const BoundedValue narrow = eval_bounds(p, x, x);
    const BoundedValue wide = eval_bounds(p, x - 0.0625, x + 0.0625);
    CHECK(fp_less_equal(wide.lo, narrow.lo));
    CHECK(fp_less_equal(narrow.hi, wide.hi));
  }
}

TEST_CASE("programs with parameters") {
  ExprProgram p;
  const Operand y = p.mul(ExprProgram::input(), p.param(0));
  p.set_result(p.add(y, p.constant(1.0)));
  const std::vector<double> params{8.0};
  CHECK(eval_soft(p, 0.5, Rounding::RN, params) == 5.0);
  CHECK(eval_bounds(p, 0.5, 0.75, params).hi == 7.0);
  const std::vector<Rounding> modes{Rounding::RU, Rounding::RD};
  CHECK(eval_assignment(p, 0.5, modes, params) == 5.0);
  ExprProgram copy = ExprProgram::from_parts(p.constants(), p.param_count(), p.ops(), p.result());
  CHECK(copy == p);
  copy.set_constant(0, 2.0);
  CHECK(!(copy == p));
  ExprProgram big;
  Operand acc = ExprProgram::input();
  for (std::size_t i = 0; i < ExprProgram::kMaxOps; ++i) acc = big.add(acc, ExprProgram::input());
  CHECK_THROWS(big.add(acc, ExprProgram::input()));
}

TEST_CASE("constant programs and zero operands") {
  ExprProgram p;
  p.set_result(p.constant(0.1));
  const BoundedValue c = eval_bounds(p, 5.0, 6.0);
  CHECK(c.lo == 0.1);
  CHECK(c.hi == 0.1);
  const BoundedValue s = bv_add(BoundedValue::point(1.5), BoundedValue::point(2.25));
  CHECK(s.lo == 3.75);
  CHECK(s.hi == 3.75);
  for (double v : {2.0, -2.0, 0.0, -0.0}) {
    for (double z : {0.0, -0.0}) {
      const BoundedValue r = bv_mul(BoundedValue::point(z), BoundedValue::point(v));
      const bool negative = std::signbit(z) != std::signbit(v);
      CHECK(r.lo == 0.0);
      CHECK(std::signbit(r.lo) == negative);
      CHECK(same_bits(r.lo, r.hi));
    }
  }
}
