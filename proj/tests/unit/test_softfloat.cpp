// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include <cfenv>
#include <cmath>
#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "rinv/fenv.hpp"
#include "rinv/softfloat.hpp"

using namespace rinv;

namespace {

// Brute-force rounding over every finite value of a small format.
SoftValue round_by_scan(const BigRational& r, FloatFormat f, Rounding mode) {
  std::vector<SoftValue> finite;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << f.total_bits()); ++b) {
    SoftValue v(f, b);
    if (v.is_finite() && !(v.is_zero() && v.is_negative())) finite.push_back(v);
  }
  std::sort(finite.begin(), finite.end(),
            [](const SoftValue& a, const SoftValue& b) { return to_rational(a) < to_rational(b); });
  const SoftValue* below = nullptr;
  const SoftValue* above = nullptr;
  for (const auto& v : finite) {
    const BigRational q = to_rational(v);
    if (q <= r) below = &v;
    if (q >= r && !above) above = &v;
  }
  const bool neg = r.sign() < 0;
  if (below && above && below->bits() == above->bits()) return *below;
  // Beyond the largest finite value RN overflows at max + ulp/2.
  const BigRational top = to_rational(finite.back());
  const BigRational half_ulp = (top - to_rational(finite[finite.size() - 2])) / BigRational(2);
  const bool rn_overflow = r.abs() >= top + half_ulp;
  if (!above) {
    if (mode == Rounding::RU || (mode == Rounding::RN && rn_overflow)) return SoftValue::infinity(f);
    return SoftValue::max_finite(f);
  }
  if (!below) {
    if (mode == Rounding::RD || (mode == Rounding::RN && rn_overflow)) return SoftValue::infinity(f, true);
    return SoftValue::max_finite(f, true);
  }
  auto fix_zero = [&](SoftValue v) { return v.is_zero() && neg ? SoftValue::zero(f, true) : v; };
  switch (mode) {
    case Rounding::RD: return fix_zero(*below);
    case Rounding::RU: return fix_zero(*above);
    case Rounding::RZ: return fix_zero(neg ? *above : *below);
    case Rounding::RO: return below->is_odd() ? *below : *above;
    case Rounding::RN: {
      const BigRational db = r - to_rational(*below);
      const BigRational da = to_rational(*above) - r;
      if (db < da) return fix_zero(*below);
      if (da < db) return fix_zero(*above);
      return fix_zero(below->is_odd() ? *above : *below);
    }
  }
  return *below;
}

double hw_add(double a, double b, fenv::AmbientMode m) {
  return fenv::with_mode(m, [&] { return fenv::opaque(fenv::opaque(a) + fenv::opaque(b)); });
}

double hw_mul(double a, double b, fenv::AmbientMode m) {
  return fenv::with_mode(m, [&] { return fenv::opaque(fenv::opaque(a) * fenv::opaque(b)); });
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

}  // namespace

TEST_CASE("format parsing and layout") {
  const FloatFormat f = FloatFormat::parse("e5 m11");
  CHECK(f == FloatFormat::binary16());
  CHECK(FloatFormat::parse("e5m9").precision() == 9);
  CHECK(f.total_bits() == 16);
  CHECK(f.bias() == 15);
  CHECK(f.e_min() == -14);
  CHECK(f.to_string() == "e5 m11");
  CHECK(FloatFormat(5, 9).widened(2) == FloatFormat(5, 11));
  CHECK_THROWS(FloatFormat::parse("e1 m4"));
  CHECK_THROWS(FloatFormat::parse("m4"));
}

TEST_CASE("binary16 reference encodings") {
  const FloatFormat h = FloatFormat::binary16();
  CHECK(to_double(SoftValue(h, 0x3c00)) == 1.0);
  CHECK(to_double(SoftValue(h, 0x7bff)) == 65504.0);
  CHECK(to_double(SoftValue(h, 0x0001)) == std::ldexp(1.0, -24));
  CHECK(to_double(SoftValue(h, 0x0400)) == std::ldexp(1.0, -14));
  CHECK(SoftValue(h, 0x7c00).is_inf());
  CHECK(SoftValue(h, 0x7e00).is_nan());
  CHECK(round(BigRational(1, 3), h, Rounding::RN).bits() == 0x3555);
  CHECK(round(BigRational(65520), h, Rounding::RN).is_inf());
  CHECK(round(BigRational(65519), h, Rounding::RN).bits() == 0x7bff);
  CHECK(round(BigRational(65520), h, Rounding::RZ).bits() == 0x7bff);
}

TEST_CASE("rounding matches an exhaustive scan of a small format") {
  const FloatFormat f(3, 4);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 3000; ++i) {
    const long num = static_cast<long>(rng() % 40001) - 20000;
    const long den = static_cast<long>(rng() % 997) + 1;
    if (num == 0) continue;
    const BigRational r(num, den);
    for (Rounding m : {Rounding::RN, Rounding::RZ, Rounding::RD, Rounding::RU, Rounding::RO}) {
      INFO("r=" << r << " mode=" << to_string(m));
      CHECK(round(r, f, m).bits() == round_by_scan(r, f, m).bits());
    }
  }
}

TEST_CASE("round to odd keeps exact values and marks inexact ones odd") {
  const FloatFormat f(5, 7);
  CHECK(round(BigRational(3), f, Rounding::RO) == round(BigRational(3), f, Rounding::RN));
  const SoftValue v = round(BigRational(1, 3), f, Rounding::RO);
  CHECK(v.is_odd());
  CHECK(round(BigRational::pow2(-40), f, Rounding::RO) == SoftValue::min_subnormal(f));
  CHECK(round(BigRational::pow2(40), f, Rounding::RO) == SoftValue::max_finite(f));
}

TEST_CASE("succ and pred walk the encoding") {
  const FloatFormat f(5, 5);
  CHECK(succ(SoftValue::zero(f)) == SoftValue::min_subnormal(f));
  CHECK(succ(SoftValue::zero(f, true)) == SoftValue::min_subnormal(f));
  CHECK(pred(SoftValue::zero(f)) == SoftValue::min_subnormal(f, true));
  CHECK(succ(SoftValue::max_finite(f)).is_inf());
  CHECK(pred(SoftValue::infinity(f)) == SoftValue::max_finite(f));
  for (std::uint64_t b = 0; b < 1024; ++b) {
    const SoftValue v(f, b);
    if (!v.is_finite() || v == SoftValue::max_finite(f)) continue;
    const SoftValue s = succ(v);
    CHECK(to_rational(s) > to_rational(v));
    if (s.is_finite() && !s.is_zero()) CHECK(pred(s).bits() == (v.is_zero() ? pred(s).bits() : v.bits()));
  }
  CHECK_THROWS(succ(SoftValue::nan(f)));
}

TEST_CASE("hex encodings round-trip") {
  const FloatFormat f(5, 9);
  CHECK(SoftValue(f, 0x1a5).hex() == "01a5");
  CHECK(SoftValue::from_hex(f, "01a5").bits() == 0x1a5);
  CHECK(parse_hex("3ff0000000000000") == 0x3ff0000000000000ULL);
  CHECK_THROWS(parse_hex("xyz"));
}

TEST_CASE("binary64 arithmetic matches the hardware in every mode") {
  testing::DoubleSource src(11);
  for (int i = 0; i < 20000; ++i) {
    auto [a, b] = src.pair();
    for (fenv::AmbientMode m : fenv::kAllModes) {
      const Rounding r = fenv::to_rounding(m);
      const double hs = hw_add(a, b, m);
      const double hp = hw_mul(a, b, m);
      INFO(std::hexfloat << a << " " << b << " " << to_string(m));
      CHECK(same_bits(add64(a, b, r), hs));
      CHECK(same_bits(mul64(a, b, r), hp));
    }
  }
}

TEST_CASE("zero signs of sums and products") {
  CHECK(std::signbit(add64(0.0, -0.0, Rounding::RD)));
  CHECK(!std::signbit(add64(0.0, -0.0, Rounding::RN)));
  CHECK(std::signbit(add64(-0.0, -0.0, Rounding::RU)));
  CHECK(std::signbit(add64(1.0, -1.0, Rounding::RD)));
  CHECK(!std::signbit(add64(1.0, -1.0, Rounding::RZ)));
  CHECK(std::signbit(mul64(-0.0, 3.0, Rounding::RU)));
  CHECK(!std::signbit(mul64(-0.0, -3.0, Rounding::RD)));
  CHECK(std::signbit(mul64(-0x1p-600, 0x1p-600, Rounding::RZ)));
}

TEST_CASE("fused multiply-add rounds once") {
  const double a = 1.0 + 0x1p-30;
  const double b = 1.0 - 0x1p-30;
  CHECK(fma64(a, b, -1.0, Rounding::RN) == -0x1p-60);
  CHECK(fma64(0x1p-1074, 0.5, 0.0, Rounding::RU) == 0x1p-1074);
  CHECK(fma64(0x1p-1074, 0.5, 0.0, Rounding::RD) == 0.0);
  CHECK(std::signbit(fma64(1.0, -1.0, 1.0, Rounding::RD)));
}

TEST_CASE("small-format arithmetic agrees with rational rounding") {
  const FloatFormat f(4, 5);
  for (std::uint64_t x = 0; x < 512; x += 3) {
    for (std::uint64_t y = 0; y < 512; y += 5) {
      const SoftValue a(f, x), b(f, y);
      if (!a.is_finite() || !b.is_finite()) continue;
      const BigRational s = to_rational(a) + to_rational(b);
      const BigRational p = to_rational(a) * to_rational(b);
      for (Rounding m : kStandardRoundings) {
        if (!s.is_zero()) CHECK(add(a, b, m) == round(s, f, m));
        if (!p.is_zero()) CHECK(mul(a, b, m) == round(p, f, m));
      }
    }
  }
}

TEST_CASE("worked examples") {
  CHECK(BigRational::from_double(1.0) == BigRational(1));
  CHECK(to_rational(SoftValue::min_subnormal(FloatFormat::binary16())) == BigRational::pow2(-24));
  CHECK(BigRational::from_double(std::bit_cast<double>(0x3FF0000000000001ULL)) ==
        BigRational(1) + BigRational::pow2(-52));
  // 17/16 sits between 1.0 (bits ...00) and 1.25 (bits ...01) in a 3-bit significand.
  const SoftValue ro = round(BigRational(17, 16), FloatFormat(4, 3), Rounding::RO);
  CHECK(to_double(ro) == 1.25);
  CHECK(ro.is_odd());
  for (FloatFormat f : {FloatFormat(2, 3), FloatFormat(5, 11), FloatFormat::binary64()}) {
    for (Rounding m : {Rounding::RN, Rounding::RZ, Rounding::RD, Rounding::RU, Rounding::RO}) {
      CHECK(round(BigRational(2), f, m) == round(BigRational(2), f, Rounding::RN));
      CHECK(to_double(round(BigRational(2), f, m)) == 2.0);
    }
  }
  const FloatFormat d = FloatFormat::binary64();
  CHECK(to_double(succ(from_double(1.0))) == 1.0 + 0x1p-52);
  CHECK(pred(SoftValue::min_subnormal(d)) == SoftValue::zero(d));
  CHECK(pred(SoftValue::zero(d)) == SoftValue::min_subnormal(d, true));
  CHECK(ulp(from_double(1.0)) == BigRational::pow2(-52));
  for (std::uint64_t b = 1; b < 0x400; ++b) {
    const SoftValue v(FloatFormat::binary16(), b);
    if (v.is_subnormal()) CHECK(ulp(v) == BigRational::pow2(-24));
  }
  CHECK(sign(SoftValue::zero(d)) == 0);
  CHECK(sign(SoftValue::zero(d, true)) == 1);
  CHECK(sign(from_double(-3.5)) == 1);
}

TEST_CASE("succ and pred follow the exhaustive order of an 8-bit format") {
  const FloatFormat f(4, 4);
  std::vector<SoftValue> order;
  for (std::uint64_t b = 0; b < 256; ++b) {
    const SoftValue v(f, b);
    if (v.is_finite() && !(v.is_zero() && v.is_negative())) order.push_back(v);
  }
  std::sort(order.begin(), order.end(),
            [](const SoftValue& a, const SoftValue& b) { return to_rational(a) < to_rational(b); });
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    // Stepping onto zero from below lands on -0, which compares equal to +0.
    CHECK(to_rational(succ(order[i])) == to_rational(order[i + 1]));
    if (!order[i + 1].is_zero()) CHECK(succ(order[i]) == order[i + 1]);
    CHECK(pred(order[i + 1]) == order[i]);
  }
  CHECK(pred(SoftValue::zero(f)) == SoftValue::min_subnormal(f, true));
}

TEST_CASE("rounding order, monotonicity and symmetry") {
  const FloatFormat f(4, 4);
  std::vector<BigRational> points;
  std::vector<BigRational> values;
  for (std::uint64_t b = 0; b < 256; ++b) {
    const SoftValue v(f, b);
    if (v.is_finite()) values.push_back(to_rational(v));
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const BigRational mid = (values[i] + values[i + 1]) / BigRational(2);
    points.push_back(mid);
    points.push_back(values[i] + (values[i + 1] - values[i]) / BigRational(3));
    points.push_back(values[i]);
  }
  points.push_back(values.back() * BigRational(3));
  points.push_back(-values.back() * BigRational(3));
  auto ext = [](const SoftValue& v) { return v.is_inf() ? (v.is_negative() ? -1e300 : 1e300) : to_double(v); };
  std::erase_if(points, [](const BigRational& r) { return r.is_zero(); });
  for (const BigRational& r : points) {
    const SoftValue dn = round(r, f, Rounding::RD), up = round(r, f, Rounding::RU);
    for (Rounding m : {Rounding::RN, Rounding::RZ, Rounding::RD, Rounding::RU, Rounding::RO}) {
      const SoftValue v = round(r, f, m);
      CHECK(ext(dn) <= ext(v));
      CHECK(ext(v) <= ext(up));
      CHECK(v.is_negative() == (r.sign() < 0));
    }
    CHECK(round(-r, f, Rounding::RD) == round(r, f, Rounding::RU).negated());
  }
  std::sort(points.begin(), points.end());
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    CHECK(ext(round(points[i], f, Rounding::RD)) <= ext(round(points[i + 1], f, Rounding::RD)));
    CHECK(ext(round(points[i], f, Rounding::RU)) <= ext(round(points[i + 1], f, Rounding::RU)));
  }
}
