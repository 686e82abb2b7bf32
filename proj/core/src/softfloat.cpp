// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "rinv/softfloat.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace rinv {

namespace {

using u128 = unsigned __int128;

int bit_length(u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  if (hi != 0) return 128 - std::countl_zero(hi);
  return 64 - std::countl_zero(static_cast<std::uint64_t>(v));
}

SoftValue overflow_result(FloatFormat f, bool negative, Rounding mode) {
  switch (mode) {
    case Rounding::RN:
      return SoftValue::infinity(f, negative);
    case Rounding::RZ:
    case Rounding::RO:
      return SoftValue::max_finite(f, negative);
    case Rounding::RD:
      return negative ? SoftValue::infinity(f, true) : SoftValue::max_finite(f, false);
    case Rounding::RU:
      return negative ? SoftValue::max_finite(f, true) : SoftValue::infinity(f, false);
  }
  return SoftValue::nan(f);
}

// Rounds (sig + d) * 2^exp, with d in (0, 1) iff `sticky`. When `sticky` is
// set, sig must carry at least p + 1 significant bits so that the guard bit
// is known.
SoftValue round_core(FloatFormat f, bool negative, std::uint64_t sig, std::int64_t exp,
                     bool sticky, Rounding mode) {
  assert(sig != 0);
  const int p = f.precision();
  const int msb = 63 - std::countl_zero(sig);
  const std::int64_t e = msb + exp;
  if (e > f.e_max()) return overflow_result(f, negative, mode);

  std::int64_t quantum = std::max<std::int64_t>(e, f.e_min()) - (p - 1);
  const std::int64_t shift = quantum - exp;
  std::uint64_t kept = 0;
  bool guard = false;
  if (shift <= 0) {
    assert(!sticky);
    kept = sig << (-shift);
  } else if (shift > 64) {
    sticky = true;
  } else if (shift == 64) {
    guard = (sig >> 63) != 0;
    sticky = sticky || (sig << 1) != 0;
  } else {
    kept = sig >> shift;
    guard = ((sig >> (shift - 1)) & 1) != 0;
    const std::uint64_t below = shift == 1 ? 0 : sig & ((std::uint64_t{1} << (shift - 1)) - 1);
    sticky = sticky || below != 0;
  }

  const bool inexact = guard || sticky;
  switch (mode) {
    case Rounding::RN:
      if (guard && (sticky || (kept & 1))) ++kept;
      break;
    case Rounding::RZ:
      break;
    case Rounding::RD:
      if (negative && inexact) ++kept;
      break;
    case Rounding::RU:
      if (!negative && inexact) ++kept;
      break;
    case Rounding::RO:
      if (inexact) kept |= 1;
      break;
  }

  if (kept == 0) return SoftValue::zero(f, negative);
  if (kept >> p) {
    kept >>= 1;
    ++quantum;
  }
  const std::uint64_t hidden = std::uint64_t{1} << (p - 1);
  std::uint64_t biased = 0;
  std::uint64_t frac = kept;
  if (kept >= hidden) {
    const std::int64_t e2 = quantum + p - 1;
    if (e2 > f.e_max()) return overflow_result(f, negative, mode);
    biased = static_cast<std::uint64_t>(e2 + f.bias());
    frac = kept - hidden;
  }
  std::uint64_t bits = (biased << f.fraction_bits()) | frac;
  if (negative) bits |= f.sign_mask();
  return {f, bits};
}

SoftValue round_wide(FloatFormat f, bool negative, u128 sig, std::int64_t exp, bool sticky,
                     Rounding mode) {
  const int len = bit_length(sig);
  if (len > 64) {
    const int drop = len - 64;
    const u128 lost = sig & ((u128{1} << drop) - 1);
    sticky = sticky || lost != 0;
    sig >>= drop;
    exp += drop;
  }
  return round_core(f, negative, static_cast<std::uint64_t>(sig), exp, sticky, mode);
}

struct Unpacked {
  bool negative;
  std::uint64_t sig;  // 0 for zero
  std::int64_t exp;   // value = sig * 2^exp
};

Unpacked unpack(const SoftValue& v) {
  const FloatFormat& f = v.format();
  return {v.is_negative(), v.significand(),
          static_cast<std::int64_t>(v.exponent()) - (f.precision() - 1)};
}

void require_finite(const SoftValue& v, const char* what) {
  if (!v.is_finite()) throw std::domain_error(std::string(what) + ": non-finite operand");
}

SoftValue zero_sum(FloatFormat f, bool neg_a, bool neg_b, Rounding mode) {
  if (neg_a == neg_b) return SoftValue::zero(f, neg_a);
  return SoftValue::zero(f, mode == Rounding::RD);
}

}  // namespace

std::string_view to_string(Rounding mode) {
  switch (mode) {
    case Rounding::RN: return "RN";
    case Rounding::RZ: return "RZ";
    case Rounding::RD: return "RD";
    case Rounding::RU: return "RU";
    case Rounding::RO: return "RO";
  }
  return "?";
}

Rounding parse_rounding(std::string_view text) {
  std::string up(text);
  for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "RN") return Rounding::RN;
  if (up == "RZ") return Rounding::RZ;
  if (up == "RD") return Rounding::RD;
  if (up == "RU") return Rounding::RU;
  if (up == "RO") return Rounding::RO;
  throw std::invalid_argument("unknown rounding mode '" + std::string(text) + "'");
}

FloatFormat::FloatFormat(int exponent_bits, int precision)
    : exponent_bits_(exponent_bits), precision_(precision) {
  if (exponent_bits < 2 || precision < 2 || exponent_bits + precision > 64) {
    throw std::invalid_argument("FloatFormat: need exponent_bits >= 2, precision >= 2, width <= 64");
  }
}

FloatFormat FloatFormat::parse(std::string_view text) {
  auto skip_ws = [&](std::size_t i) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    return i;
  };
  auto read_field = [&](std::size_t& i, char tag) {
    i = skip_ws(i);
    if (i >= text.size() || (text[i] != tag && text[i] != std::toupper(tag))) {
      throw std::invalid_argument("bad format '" + std::string(text) + "', expected \"eE mM\"");
    }
    ++i;
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
    if (ec != std::errc()) {
      throw std::invalid_argument("bad format '" + std::string(text) + "', expected \"eE mM\"");
    }
    i = static_cast<std::size_t>(ptr - text.data());
    return value;
  };
  std::size_t i = 0;
  const int e = read_field(i, 'e');
  const int m = read_field(i, 'm');
  if (skip_ws(i) != text.size()) {
    throw std::invalid_argument("bad format '" + std::string(text) + "': trailing characters");
  }
  return {e, m};
}

bool FloatFormat::embeds_in_binary64() const {
  return precision_ <= 53 && e_max() <= 1023 && e_min() - (precision_ - 1) >= -1074;
}

std::string FloatFormat::to_string() const {
  return "e" + std::to_string(exponent_bits_) + " m" + std::to_string(precision_);
}

SoftValue::SoftValue(FloatFormat format, std::uint64_t bits) : format_(format), bits_(bits) {
  if ((bits & ~format.all_bits_mask()) != 0) {
    throw std::invalid_argument("SoftValue: bit pattern wider than format " + format.to_string());
  }
}

SoftValue SoftValue::zero(FloatFormat f, bool negative) {
  return {f, negative ? f.sign_mask() : 0};
}

SoftValue SoftValue::infinity(FloatFormat f, bool negative) {
  std::uint64_t bits = f.exponent_field_max() << f.fraction_bits();
  return {f, negative ? bits | f.sign_mask() : bits};
}

SoftValue SoftValue::nan(FloatFormat f) {
  return {f, (f.exponent_field_max() << f.fraction_bits()) |
                 (std::uint64_t{1} << (f.fraction_bits() - 1))};
}

SoftValue SoftValue::max_finite(FloatFormat f, bool negative) {
  std::uint64_t bits = ((f.exponent_field_max() - 1) << f.fraction_bits()) | f.fraction_mask();
  return {f, negative ? bits | f.sign_mask() : bits};
}

SoftValue SoftValue::min_subnormal(FloatFormat f, bool negative) {
  return {f, negative ? f.sign_mask() | 1 : 1};
}

SoftValue SoftValue::from_hex(FloatFormat f, std::string_view hex) {
  return {f, parse_hex(hex)};
}

std::uint64_t SoftValue::significand() const {
  if (biased_exponent() == 0) return fraction();
  return fraction() | (std::uint64_t{1} << format_.fraction_bits());
}

int SoftValue::exponent() const {
  const auto be = biased_exponent();
  if (be == 0) return format_.e_min();
  return static_cast<int>(be) - format_.bias();
}

std::string SoftValue::hex() const { return to_hex(bits_, format_.hex_width()); }

std::string to_hex(std::uint64_t bits, int width) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(static_cast<std::size_t>(width), '0');
  for (int i = width - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[bits & 0xf];
    bits >>= 4;
  }
  return out;
}

std::uint64_t parse_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), value, 16);
  if (ec != std::errc() || ptr != hex.data() + hex.size() || hex.empty()) {
    throw std::invalid_argument("bad hex bit pattern '" + std::string(hex) + "'");
  }
  return value;
}

Decoded decode(const SoftValue& v) {
  if (v.is_nan()) return {ValueKind::NaN, v.is_negative(), BigRational()};
  if (v.is_inf()) return {ValueKind::Infinity, v.is_negative(), BigRational()};
  if (v.is_zero()) return {ValueKind::Zero, v.is_negative(), BigRational()};
  return {ValueKind::Finite, v.is_negative(), to_rational(v)};
}

BigRational to_rational(const SoftValue& v) {
  if (!v.is_finite()) throw std::domain_error("to_rational: value is not finite");
  if (v.is_zero()) return BigRational();
  const Unpacked u = unpack(v);
  mpz_class m;
  mpz_import(m.get_mpz_t(), 1, 1, sizeof(u.sig), 0, 0, &u.sig);
  if (u.negative) m = -m;
  return BigRational(m) * BigRational::pow2(u.exp);
}

SoftValue round(const BigRational& r, FloatFormat f, Rounding mode) {
  if (r.is_zero()) throw std::invalid_argument("round: zero has no rounding (sign is undefined)");
  const bool negative = r.sign() < 0;
  const mpz_class n = ::abs(r.num());
  const mpz_class& d = r.den();
  const long bn = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2));
  const long bd = static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2));
  const long s = 63 - (bn - bd);
  mpz_class num = n;
  mpz_class den = d;
  if (s >= 0) {
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
  } else {
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-s));
  }
  mpz_class q;
  mpz_class rem;
  mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  std::uint64_t sig = 0;
  mpz_export(&sig, nullptr, 1, sizeof(sig), 0, 0, q.get_mpz_t());
  return round_core(f, negative, sig, -s, rem != 0, mode);
}

SoftValue round_double(double d, FloatFormat f, Rounding mode) {
  const auto bits = std::bit_cast<std::uint64_t>(d);
  const bool negative = (bits >> 63) != 0;
  if (std::isnan(d)) return SoftValue::nan(f);
  if (std::isinf(d)) return SoftValue::infinity(f, negative);
  if (d == 0) return SoftValue::zero(f, negative);
  const int biased = static_cast<int>((bits >> 52) & 0x7ff);
  std::uint64_t sig = bits & ((std::uint64_t{1} << 52) - 1);
  std::int64_t exp = -1074;
  if (biased != 0) {
    sig |= std::uint64_t{1} << 52;
    exp = biased - 1075;
  }
  return round_core(f, negative, sig, exp, false, mode);
}

double to_double(const SoftValue& v) {
  const FloatFormat& f = v.format();
  if (f == FloatFormat::binary64()) return std::bit_cast<double>(v.bits());
  if (!f.embeds_in_binary64()) {
    throw std::domain_error("to_double: format " + f.to_string() + " does not embed in binary64");
  }
  const bool neg = v.is_negative();
  if (v.is_nan()) return std::bit_cast<double>(std::uint64_t{0x7ff8000000000000});
  if (v.is_inf()) return neg ? -HUGE_VAL : HUGE_VAL;
  if (v.is_zero()) return neg ? -0.0 : 0.0;
  const Unpacked u = unpack(v);
  const double mag = std::ldexp(static_cast<double>(u.sig), static_cast<int>(u.exp));
  return neg ? -mag : mag;
}

SoftValue from_double(double d) { return {FloatFormat::binary64(), std::bit_cast<std::uint64_t>(d)}; }

SoftValue succ(const SoftValue& v) {
  if (v.is_nan()) throw std::domain_error("succ: NaN has no neighbor");
  const FloatFormat& f = v.format();
  if (v.is_zero()) return SoftValue::min_subnormal(f, false);
  if (v.is_inf()) {
    if (v.is_negative()) return SoftValue::max_finite(f, true);
    throw std::domain_error("succ: +inf has no successor");
  }
  return {f, v.is_negative() ? v.bits() - 1 : v.bits() + 1};
}

SoftValue pred(const SoftValue& v) {
  if (v.is_nan()) throw std::domain_error("pred: NaN has no neighbor");
  const FloatFormat& f = v.format();
  if (v.is_zero()) return SoftValue::min_subnormal(f, true);
  if (v.is_inf()) {
    if (!v.is_negative()) return SoftValue::max_finite(f, false);
    throw std::domain_error("pred: -inf has no predecessor");
  }
  return {f, v.is_negative() ? v.bits() + 1 : v.bits() - 1};
}

BigRational ulp(const SoftValue& v) {
  if (!v.is_finite() || v.is_zero()) throw std::domain_error("ulp: needs a finite nonzero value");
  return BigRational::pow2(v.exponent() - v.format().precision() + 1);
}

int sign(const SoftValue& v) {
  if (v.is_nan()) throw std::domain_error("sign: NaN has no sign");
  return v.is_negative() ? 1 : 0;
}

std::int64_t order_key(const SoftValue& v) {
  if (v.is_nan()) throw std::domain_error("order_key: NaN is unordered");
  const auto mag = static_cast<std::int64_t>(v.bits() & v.format().magnitude_mask());
  return v.is_negative() ? -mag : mag;
}

SoftValue add(const SoftValue& a, const SoftValue& b, Rounding mode) {
  require_finite(a, "add");
  require_finite(b, "add");
  if (!(a.format() == b.format())) throw std::invalid_argument("add: format mismatch");
  const FloatFormat f = a.format();
  if (a.is_zero() && b.is_zero()) return zero_sum(f, a.is_negative(), b.is_negative(), mode);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.bits() == (b.bits() ^ f.sign_mask())) return zero_sum(f, false, true, mode);

  Unpacked x = unpack(a);
  Unpacked y = unpack(b);
  if (x.exp < y.exp) std::swap(x, y);
  const std::int64_t d = x.exp - y.exp;

  u128 big = 0;
  u128 small = 0;
  std::int64_t exp = 0;
  bool sticky = false;
  if (d <= 64) {
    big = u128{x.sig} << d;
    small = y.sig;
    exp = y.exp;
  } else {
    // y lies entirely below the 2^(x.exp - 64) resolution; keep its top
    // bits and fold the remainder into a sticky bit.
    big = u128{x.sig} << 64;
    exp = x.exp - 64;
    const std::int64_t drop = d - 64;
    small = drop >= 64 ? 0 : (y.sig >> drop);
    sticky = drop >= 64 ? true : (y.sig & ((std::uint64_t{1} << drop) - 1)) != 0;
  }

  if (x.negative == y.negative) return round_wide(f, x.negative, big + small, exp, sticky, mode);
  // Opposite signs; big > small + sticky whenever d > 64.
  if (big >= small) {
    u128 diff = big - small;
    if (sticky) diff -= 1;  // big - (small + s) = (big - small - 1) + (1 - s)
    return round_wide(f, x.negative, diff, exp, sticky, mode);
  }
  return round_wide(f, y.negative, small - big, exp, false, mode);
}

SoftValue mul(const SoftValue& a, const SoftValue& b, Rounding mode) {
  require_finite(a, "mul");
  require_finite(b, "mul");
  if (!(a.format() == b.format())) throw std::invalid_argument("mul: format mismatch");
  const FloatFormat f = a.format();
  const bool negative = a.is_negative() != b.is_negative();
  if (a.is_zero() || b.is_zero()) return SoftValue::zero(f, negative);
  const Unpacked x = unpack(a);
  const Unpacked y = unpack(b);
  return round_wide(f, negative, u128{x.sig} * y.sig, x.exp + y.exp, false, mode);
}

SoftValue fma(const SoftValue& a, const SoftValue& b, const SoftValue& c, Rounding mode) {
  require_finite(a, "fma");
  require_finite(b, "fma");
  require_finite(c, "fma");
  const FloatFormat f = a.format();
  const bool product_negative = a.is_negative() != b.is_negative();
  const bool product_zero = a.is_zero() || b.is_zero();
  if (product_zero) {
    if (c.is_zero()) return zero_sum(f, product_negative, c.is_negative(), mode);
    return c;
  }
  const BigRational exact = to_rational(a) * to_rational(b) + to_rational(c);
  if (exact.is_zero()) return SoftValue::zero(f, mode == Rounding::RD);
  return round(exact, f, mode);
}

double add64(double a, double b, Rounding mode) {
  return std::bit_cast<double>(add(from_double(a), from_double(b), mode).bits());
}

double mul64(double a, double b, Rounding mode) {
  return std::bit_cast<double>(mul(from_double(a), from_double(b), mode).bits());
}

double fma64(double a, double b, double c, Rounding mode) {
  return std::bit_cast<double>(fma(from_double(a), from_double(b), from_double(c), mode).bits());
}

double round64(const BigRational& r, Rounding mode) {
  return std::bit_cast<double>(round(r, FloatFormat::binary64(), mode).bits());
}

}  // namespace rinv
