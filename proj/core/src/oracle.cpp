// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "rinv/oracle.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "rinv/parallel.hpp"

namespace rinv {

std::string_view to_string(Function fn) { return fn == Function::Exp2 ? "exp2" : "log2"; }

Function parse_function(std::string_view text) {
  if (text == "exp2") return Function::Exp2;
  if (text == "log2") return Function::Log2;
  throw std::invalid_argument("unknown function: " + std::string(text));
}

double RoundingInterval::lo_value() const { return std::bit_cast<double>(lo); }
double RoundingInterval::hi_value() const { return std::bit_cast<double>(hi); }

double next_up(double x) {
  if (std::isnan(x) || x == std::numeric_limits<double>::infinity()) return x;
  if (x == 0) return std::numeric_limits<double>::denorm_min();
  auto b = std::bit_cast<std::uint64_t>(x);
  return std::bit_cast<double>(x > 0 ? b + 1 : b - 1);
}

double next_down(double x) { return -next_up(-x); }

namespace oracle {

namespace {

mpz_class fdiv(const mpz_class& n, const mpz_class& d) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return q;
}

mpz_class cdiv(const mpz_class& n, const mpz_class& d) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return q;
}

// Fixed-point bounds, units of 2^-P.
struct Fixed {
  mpz_class lo;
  mpz_class hi;
};

// atanh(s) for rational 0 <= s <= 1/3.
Fixed atanh_fixed(const BigRational& s, long P) {
  const mpz_class& sn = s.num();
  const mpz_class& sd = s.den();
  const mpz_class s2n = sn * sn;
  const mpz_class s2d = sd * sd;
  mpz_class scaled = sn << P;
  Fixed out;
  mpz_class pw_lo = fdiv(scaled, sd);
  mpz_class pw_hi = cdiv(scaled, sd);
  for (long j = 0; pw_lo > 0; ++j) {
    out.lo += fdiv(pw_lo, 2 * j + 1);
    pw_lo = fdiv(pw_lo * s2n, s2d);
  }
  for (long j = 0;; ++j) {
    if (pw_hi <= 1) {
      // Tail sum_{i>=j} s^(2i+1)/(2i+1) <= pw_j * 9/8.
      out.hi += 2;
      break;
    }
    out.hi += cdiv(pw_hi, 2 * j + 1);
    pw_hi = cdiv(pw_hi * s2n, s2d);
  }
  return out;
}

Fixed ln2_fixed(long P) {
  Fixed a = atanh_fixed(BigRational(1, 3), P);
  return {a.lo * 2, a.hi * 2};
}

// exp(y) for fixed-point 0 <= y < 1.
mpz_class exp_fixed(const mpz_class& y, long P, bool upper) {
  const mpz_class one = mpz_class(1) << P;
  mpz_class sum = one;
  mpz_class term = one;
  for (long k = 1;; ++k) {
    const mpz_class d = mpz_class(k) << P;
    term = upper ? cdiv(term * y, d) : fdiv(term * y, d);
    if (term == 0) break;
    sum += term;
    if (upper && term <= 1) {
      // Tail after term k is at most 2 * term_k since y / (k + 1) < 1/2.
      sum += 2;
      break;
    }
  }
  return sum;
}

RationalInterval enclose_exp2(const BigRational& x, long P) {
  const mpz_class n = x.floor();
  const BigRational r = x - BigRational(n);
  Fixed ln2 = ln2_fixed(P);
  const mpz_class y_lo = fdiv(r.num() * ln2.lo, r.den());
  const mpz_class y_hi = cdiv(r.num() * ln2.hi, r.den());
  const BigRational scale = BigRational::pow2(n.get_si() - P);
  return {BigRational(exp_fixed(y_lo, P, false)) * scale,
          BigRational(exp_fixed(y_hi, P, true)) * scale};
}

RationalInterval enclose_log2(const BigRational& x, long P) {
  // x = 2^k * m with 1 <= m < 2.
  const long k = x.ilog2();
  const BigRational m = x * BigRational::pow2(-k);
  const BigRational s = (m - 1) / (m + 1);
  Fixed at = atanh_fixed(s, P);
  Fixed ln2 = ln2_fixed(P);
  const mpz_class lo = fdiv((at.lo << (P + 1)), ln2.hi);
  const mpz_class hi = cdiv((at.hi << (P + 1)), ln2.lo);
  const BigRational scale = BigRational::pow2(-P);
  return {BigRational(k) + BigRational(lo) * scale, BigRational(k) + BigRational(hi) * scale};
}

void check_domain(Function fn, const BigRational& x) {
  if (fn == Function::Log2 && x.sign() <= 0) throw std::domain_error("log2 of non-positive value");
}

bool decided(const RationalInterval& e, FloatFormat f, Rounding mode) {
  if (e.lo.sign() != e.hi.sign() || e.lo.is_zero()) return false;
  return round(e.lo, f, mode) == round(e.hi, f, mode);
}

SoftValue from_special(double d, FloatFormat out) {
  if (std::isnan(d)) return SoftValue::nan(out);
  if (std::isinf(d)) return SoftValue::infinity(out, d < 0);
  return SoftValue::zero(out, std::signbit(d));
}

}  // namespace

std::optional<BigRational> exact_value(Function fn, const BigRational& x) {
  check_domain(fn, x);
  if (fn == Function::Exp2) {
    if (x.is_integer()) return BigRational::pow2(x.num().get_si());
    return std::nullopt;
  }
  const long k = x.ilog2();
  if (x == BigRational::pow2(k)) return BigRational(k);
  return std::nullopt;
}

RationalInterval enclose(Function fn, const BigRational& x, long fraction_bits) {
  if (auto e = exact_value(fn, x)) return {*e, *e};
  return fn == Function::Exp2 ? enclose_exp2(x, fraction_bits) : enclose_log2(x, fraction_bits);
}

RationalInterval eval_fn(Function fn, const BigRational& x, const BigRational& target_gap) {
  for (long P = 64; P <= kOraclePrecisionCap; P *= 2) {
    RationalInterval e = enclose(fn, x, P);
    if (e.width() < target_gap) return e;
  }
  throw OracleError("enclosure did not reach the requested width within the precision cap");
}

std::optional<double> special_value(Function fn, const SoftValue& x) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (x.is_nan()) return nan;
  if (fn == Function::Exp2) {
    if (x.is_inf()) return x.is_negative() ? 0.0 : inf;
    return std::nullopt;
  }
  if (x.is_zero()) return -inf;
  if (x.is_negative()) return nan;
  if (x.is_inf()) return inf;
  return std::nullopt;
}

Reference::Reference(Function fn, const SoftValue& x) : fn_(fn), x_(x) {
  special_ = special_value(fn, x);
  if (special_) return;
  input_ = to_rational(x);
  exact_ = exact_value(fn, input_);
  if (!exact_) enclosure_ = enclose(fn, input_, precision_);
}

SoftValue Reference::rounded(FloatFormat out, Rounding mode) {
  if (special_) return from_special(*special_, out);
  if (exact_) return exact_->is_zero() ? SoftValue::zero(out) : round(*exact_, out, mode);
  while (!decided(enclosure_, out, mode)) {
    if (precision_ * 2 > kOraclePrecisionCap) {
      throw OracleError("rounding of " + std::string(to_string(fn_)) + "(" + x_.hex() +
                        ") undecided at the precision cap");
    }
    precision_ *= 2;
    enclosure_ = enclose(fn_, input_, precision_);
  }
  return round(enclosure_.lo, out, mode);
}

SoftValue correctly_rounded(Function fn, const SoftValue& x, FloatFormat out, Rounding mode) {
  return Reference(fn, x).rounded(out, mode);
}

SoftValue oracle_ro(Function fn, const SoftValue& x) {
  return correctly_rounded(fn, x, x.format().widened(2), Rounding::RO);
}

RoundingInterval rounding_interval(const SoftValue& v) {
  if (!v.is_finite()) throw std::invalid_argument("rounding interval of a non-finite value");
  if (!v.is_odd()) {
    auto b = std::bit_cast<std::uint64_t>(to_double(v));
    return {b, b};
  }
  const double l = next_up(to_double(pred(v)));
  const double h = next_down(to_double(succ(v)));
  return {std::bit_cast<std::uint64_t>(l), std::bit_cast<std::uint64_t>(h)};
}

}  // namespace oracle

IntervalFile generate_intervals(Function fn, FloatFormat format, unsigned workers) {
  if (!format.embeds_in_binary64() || !format.widened(2).embeds_in_binary64()) {
    throw std::invalid_argument("format " + format.to_string() + " does not embed in binary64");
  }
  if (format.total_bits() > 24) throw std::invalid_argument("exhaustive generation limited to 24 bits");
  const std::size_t count = std::size_t{1} << format.total_bits();
  IntervalFile file{fn, format, format.total_bits() + 2, std::vector<IntervalRecord>(count)};
  parallel_shards(count, workers, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t i = begin; i < end; ++i) {
      const SoftValue x(format, i);
      IntervalRecord& rec = file.records[i];
      rec.input = i;
      if (auto s = oracle::special_value(fn, x)) {
        rec.lo = rec.hi = std::bit_cast<std::uint64_t>(*s);
        continue;
      }
      const RoundingInterval ri = oracle::rounding_interval(oracle::oracle_ro(fn, x));
      rec.lo = ri.lo;
      rec.hi = ri.hi;
    }
  });
  return file;
}

void write_interval_file(std::ostream& os, const IntervalFile& file) {
  os << "format " << file.format.to_string() << " fn " << to_string(file.fn) << " ro_bits "
     << file.ro_bits << '\n';
  const int w = file.format.hex_width();
  for (const auto& r : file.records) {
    os << to_hex(r.input, w) << ' ' << to_hex(r.lo, 16) << ' ' << to_hex(r.hi, 16) << '\n';
  }
}

IntervalFile read_interval_file(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("interval file: missing header");
  std::istringstream hs(line);
  std::string kw_format, e_part, m_part, kw_fn, fn_name, kw_ro;
  int ro_bits = 0;
  if (!(hs >> kw_format >> e_part >> m_part >> kw_fn >> fn_name >> kw_ro >> ro_bits) ||
      kw_format != "format" || kw_fn != "fn" || kw_ro != "ro_bits") {
    throw std::runtime_error("interval file: malformed header: " + line);
  }
  IntervalFile file{parse_function(fn_name), FloatFormat::parse(e_part + " " + m_part), ro_bits, {}};
  std::string a, b, c;
  while (is >> a >> b >> c) {
    file.records.push_back({parse_hex(a), parse_hex(b), parse_hex(c)});
  }
  return file;
}

}  // namespace rinv
