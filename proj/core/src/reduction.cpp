// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "rinv/reduction.hpp"

#include <string>

namespace rinv {

std::string_view to_string(ReductionKind k) {
  return k == ReductionKind::Exp2Split ? "exp2-split" : "log2-center";
}

ReductionKind parse_reduction(std::string_view text) {
  if (text == "exp2-split") return ReductionKind::Exp2Split;
  if (text == "log2-center") return ReductionKind::Log2Center;
  throw std::invalid_argument("unknown range reduction: " + std::string(text));
}

ReductionKind default_reduction(Function fn) {
  return fn == Function::Exp2 ? ReductionKind::Exp2Split : ReductionKind::Log2Center;
}

ExprProgram oc_program(ReductionKind k) {
  ExprProgram p;
  const Operand y = ExprProgram::input();
  const Operand c = p.param(0);
  if (k == ReductionKind::Exp2Split) {
    p.mul(y, c);
  } else {
    p.add(y, c);
  }
  return p;
}

bool reduction_applies(ReductionKind kind, double x) {
  if (!std::isfinite(x) || x == 0 || std::fpclassify(x) == FP_SUBNORMAL) {
    return kind == ReductionKind::Exp2Split && x == 0;
  }
  if (kind == ReductionKind::Exp2Split) {
    const double n = std::floor(x);
    if (n < -1022 || n > 1023) return false;
    const Reduced r = range_reduce(kind, x);
    return BigRational::from_double(r.x_prime) + BigRational::from_double(n) == BigRational::from_double(x);
  }
  if (x < 0) return false;
  const Reduced r = range_reduce(kind, x);
  // x = 2^P0 * (1 + x') up to the centered variant's factor of two.
  const BigRational m = BigRational::from_double(r.x_prime) + 1;
  return m * BigRational::pow2(static_cast<long>(r.param)) == BigRational::from_double(x);
}

}  // namespace rinv
