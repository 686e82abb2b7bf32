// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "rinv/bigrational.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace rinv {

BigRational::BigRational(const mpz_class& num, const mpz_class& den) : q_(num, den) {
  if (den == 0) throw std::domain_error("BigRational: zero denominator");
  q_.canonicalize();
}

BigRational BigRational::from_double(double d) {
  if (!std::isfinite(d)) throw std::domain_error("BigRational: non-finite double");
  const auto bits = std::bit_cast<std::uint64_t>(d);
  const bool neg = bits >> 63;
  const int biased = static_cast<int>((bits >> 52) & 0x7ff);
  std::uint64_t frac = bits & ((std::uint64_t{1} << 52) - 1);
  int exp = -1074;
  if (biased != 0) {
    frac |= std::uint64_t{1} << 52;
    exp = biased - 1075;
  }
  mpz_class m;
  mpz_import(m.get_mpz_t(), 1, 1, sizeof(frac), 0, 0, &frac);
  if (neg) m = -m;
  BigRational r(m);
  return r * pow2(exp);
}

BigRational BigRational::pow2(long e) {
  mpz_class one = 1;
  mpz_class p;
  if (e >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return BigRational(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return BigRational(mpz_class(1), p);
}

bool BigRational::is_dyadic() const {
  const mpz_class& d = q_.get_den();
  return mpz_popcount(d.get_mpz_t()) == 1;
}

mpz_class BigRational::floor() const {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

long BigRational::ilog2() const {
  if (is_zero()) throw std::domain_error("BigRational::ilog2 of zero");
  mpz_class n = ::abs(q_.get_num());
  const mpz_class& d = q_.get_den();
  long e = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2));
  // n/d lies in [2^(e-1), 2^(e+1)); decide which side of 2^e.
  mpz_class lhs = n;
  mpz_class rhs = d;
  if (e >= 0) {
    mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return lhs >= rhs ? e : e - 1;
}

BigRational& BigRational::operator/=(const BigRational& o) {
  if (o.is_zero()) throw std::domain_error("BigRational: division by zero");
  q_ /= o.q_;
  return *this;
}

}  // namespace rinv
