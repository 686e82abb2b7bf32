// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

namespace rinv {

/// Exact rational number in canonical form (reduced, positive denominator).
///
/// Thin value wrapper over GMP's mpq_class. Every exact quantity in the
/// toolkit (oracle enclosures, LP data, decoded float values) is one of these.
class BigRational {
 public:
  BigRational() = default;
  BigRational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  BigRational(int v) : q_(v) {}   // NOLINT(google-explicit-constructor)
  BigRational(const mpz_class& num, const mpz_class& den);
  explicit BigRational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
  explicit BigRational(const mpz_class& z) : q_(z) {}

  /// Exact value of a finite double. Throws std::domain_error for NaN/inf.
  static BigRational from_double(double d);
  /// 2^e for any integer e.
  static BigRational pow2(long e);

  const mpz_class& num() const { return q_.get_num(); }
  const mpz_class& den() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  /// True when the denominator is a power of two.
  bool is_dyadic() const;

  BigRational abs() const { return BigRational(::abs(q_)); }
  /// Largest integer not above the value.
  mpz_class floor() const;

  /// Position of the leading bit: floor(log2|x|). Requires x != 0.
  long ilog2() const;

  BigRational operator-() const { return BigRational(mpq_class(-q_)); }
  BigRational& operator+=(const BigRational& o) { q_ += o.q_; return *this; }
  BigRational& operator-=(const BigRational& o) { q_ -= o.q_; return *this; }
  BigRational& operator*=(const BigRational& o) { q_ *= o.q_; return *this; }
  BigRational& operator/=(const BigRational& o);

  friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
  friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
  friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
  friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }

  friend bool operator==(const BigRational& a, const BigRational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const BigRational& a, const BigRational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::string to_string() const { return q_.get_str(); }
  friend std::ostream& operator<<(std::ostream& os, const BigRational& r) {
    return os << r.to_string();
  }

 private:
  mpq_class q_;
};

}  // namespace rinv
