// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "rinv/bounds.hpp"

#include <array>
#include <bit>
#include <cmath>

#include "rinv/eft.hpp"

namespace rinv {

std::int64_t fp_key(double x) {
  const auto b = std::bit_cast<std::uint64_t>(x);
  const auto mag = static_cast<std::int64_t>(b & ~eft::kSignBit);
  return (b >> 63) ? -mag - 1 : mag;
}

double fp_min(double a, double b) { return fp_less(b, a) ? b : a; }
double fp_max(double a, double b) { return fp_less(a, b) ? b : a; }

bool BoundedValue::is_point() const {
  return std::bit_cast<std::uint64_t>(lo) == std::bit_cast<std::uint64_t>(hi);
}

namespace {

BoundedValue checked(BoundedValue r) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) throw BoundsOverflow("bounds evaluation overflowed");
  return r;
}

}  // namespace

BoundedValue bv_add(const BoundedValue& a, const BoundedValue& b) {
  return checked({eft::add_dir(a.lo, b.lo, eft::Direction::Down),
                  eft::add_dir(a.hi, b.hi, eft::Direction::Up)});
}

BoundedValue bv_mul(const BoundedValue& a, const BoundedValue& b) {
  using eft::Direction;
  using eft::mul_dir;
  if (a.is_point() && b.is_point()) {
    return checked({mul_dir(a.lo, b.lo, Direction::Down), mul_dir(a.lo, b.lo, Direction::Up)});
  }
  double lo = mul_dir(a.lo, b.lo, Direction::Down);
  lo = fp_min(lo, mul_dir(a.lo, b.hi, Direction::Down));
  lo = fp_min(lo, mul_dir(a.hi, b.lo, Direction::Down));
  lo = fp_min(lo, mul_dir(a.hi, b.hi, Direction::Down));
  double hi = mul_dir(a.lo, b.lo, Direction::Up);
  hi = fp_max(hi, mul_dir(a.lo, b.hi, Direction::Up));
  hi = fp_max(hi, mul_dir(a.hi, b.lo, Direction::Up));
  hi = fp_max(hi, mul_dir(a.hi, b.hi, Direction::Up));
  return checked({lo, hi});
}

std::string_view to_string(OpKind k) { return k == OpKind::Add ? "add" : "mul"; }

Operand ExprProgram::constant(double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("ExprProgram: non-finite constant");
  constants_.push_back(c);
  return {Operand::Kind::Constant, static_cast<std::uint32_t>(constants_.size() - 1)};
}

Operand ExprProgram::param(std::uint32_t i) {
  param_count_ = std::max(param_count_, i + 1);
  return {Operand::Kind::Param, i};
}

void ExprProgram::check(Operand o, std::size_t limit) const {
  switch (o.kind) {
    case Operand::Kind::Constant:
      if (o.index >= constants_.size()) throw std::invalid_argument("ExprProgram: bad constant ref");
      break;
    case Operand::Kind::Param:
      if (o.index >= param_count_) throw std::invalid_argument("ExprProgram: bad param ref");
      break;
    case Operand::Kind::Node:
      if (o.index >= limit) throw std::invalid_argument("ExprProgram: forward node ref");
      break;
    case Operand::Kind::Input:
      if (o.index != 0) throw std::invalid_argument("ExprProgram: bad input ref");
      break;
  }
}

Operand ExprProgram::push(OpKind kind, Operand a, Operand b) {
  if (ops_.size() >= kMaxOps) throw std::length_error("ExprProgram: too many operations");
  check(a, ops_.size());
  check(b, ops_.size());
  ops_.push_back({kind, a, b});
  result_ = {Operand::Kind::Node, static_cast<std::uint32_t>(ops_.size() - 1)};
  return result_;
}

void ExprProgram::set_result(Operand r) {
  check(r, ops_.size());
  result_ = r;
}

ExprProgram ExprProgram::from_parts(std::vector<double> constants, std::uint32_t param_count,
                                    std::vector<Op> ops, Operand result) {
  ExprProgram p;
  for (double c : constants) p.constant(c);
  p.param_count_ = param_count;
  for (const Op& op : ops) p.push(op.kind, op.lhs, op.rhs);
  p.set_result(result);
  return p;
}

bool operator==(const ExprProgram& a, const ExprProgram& b) {
  if (a.constants_.size() != b.constants_.size()) return false;
  for (std::size_t i = 0; i < a.constants_.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a.constants_[i]) != std::bit_cast<std::uint64_t>(b.constants_[i])) {
      return false;
    }
  }
  return a.ops_ == b.ops_ && a.param_count_ == b.param_count_ && a.result_ == b.result_;
}

std::string_view to_string(PolyBasis b) {
  switch (b) {
    case PolyBasis::Dense: return "dense";
    case PolyBasis::Even: return "even";
    case PolyBasis::Odd: return "odd";
    case PolyBasis::NoConstant: return "noconst";
  }
  return "?";
}

PolyBasis parse_basis(std::string_view text) {
  for (PolyBasis b : {PolyBasis::Dense, PolyBasis::Even, PolyBasis::Odd, PolyBasis::NoConstant}) {
    if (text == to_string(b)) return b;
  }
  throw std::invalid_argument("unknown polynomial basis: " + std::string(text));
}

std::vector<int> basis_exponents(PolyBasis b, std::size_t n) {
  std::vector<int> e(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int k = static_cast<int>(i);
    switch (b) {
      case PolyBasis::Dense: e[i] = k; break;
      case PolyBasis::Even: e[i] = 2 * k; break;
      case PolyBasis::Odd: e[i] = 2 * k + 1; break;
      case PolyBasis::NoConstant: e[i] = k + 1; break;
    }
  }
  return e;
}

ExprProgram horner(PolyBasis basis, std::span<const double> c) {
  if (c.empty()) throw std::invalid_argument("horner: no coefficients");
  ExprProgram p;
  std::vector<Operand> k;
  for (double v : c) k.push_back(p.constant(v));
  const Operand x = ExprProgram::input();
  Operand var = x;
  if (basis == PolyBasis::Even || basis == PolyBasis::Odd) var = p.mul(x, x);
  Operand r = k.back();
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    r = p.mul(r, var);
    r = p.add(r, k[i]);
  }
  if (basis == PolyBasis::Odd || basis == PolyBasis::NoConstant) r = p.mul(r, x);
  p.set_result(r);
  return p;
}

namespace {

template <class T, class Leaf, class Apply>
T fold(const ExprProgram& p, Leaf&& leaf, Apply&& apply) {
  std::array<T, ExprProgram::kMaxOps> nodes;
  auto value = [&](Operand o) -> T {
    if (o.kind == Operand::Kind::Node) return nodes[o.index];
    return leaf(o);
  };
  const auto& ops = p.ops();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    nodes[i] = apply(i, ops[i].kind, value(ops[i].lhs), value(ops[i].rhs));
  }
  return value(p.result());
}

template <class Fn>
double fold_point(const ExprProgram& p, double x, std::span<const double> params, Fn&& apply) {
  if (params.size() < p.param_count()) throw std::invalid_argument("ExprProgram: missing parameters");
  return fold<double>(
      p,
      [&](Operand o) {
        switch (o.kind) {
          case Operand::Kind::Constant: return p.constants()[o.index];
          case Operand::Kind::Param: return params[o.index];
          default: return x;
        }
      },
      apply);
}

}  // namespace

BoundedValue eval_bounds(const ExprProgram& p, const BoundedValue& input, std::span<const double> params) {
  if (params.size() < p.param_count()) throw std::invalid_argument("ExprProgram: missing parameters");
  return fold<BoundedValue>(
      p,
      [&](Operand o) {
        switch (o.kind) {
          case Operand::Kind::Constant: return BoundedValue::point(p.constants()[o.index]);
          case Operand::Kind::Param: return BoundedValue::point(params[o.index]);
          default: return input;
        }
      },
      [](std::size_t, OpKind k, const BoundedValue& a, const BoundedValue& b) {
        return k == OpKind::Add ? bv_add(a, b) : bv_mul(a, b);
      });
}

double eval_soft(const ExprProgram& p, double x, Rounding mode, std::span<const double> params) {
  return fold_point(p, x, params, [mode](std::size_t, OpKind k, double a, double b) {
    return k == OpKind::Add ? add64(a, b, mode) : mul64(a, b, mode);
  });
}

double eval_assignment(const ExprProgram& p, double x, std::span<const Rounding> modes,
                       std::span<const double> params) {
  if (modes.size() != p.ops().size()) throw std::invalid_argument("eval_assignment: one mode per op");
  return fold_point(p, x, params, [modes](std::size_t i, OpKind k, double a, double b) {
    return k == OpKind::Add ? add64(a, b, modes[i]) : mul64(a, b, modes[i]);
  });
}

double eval_rz(const ExprProgram& p, double x, std::span<const double> params) {
  return fold_point(p, x, params, [](std::size_t, OpKind k, double a, double b) {
    return k == OpKind::Add ? eft::rza(a, b) : eft::rzm(a, b);
  });
}

double eval_native(const ExprProgram& p, double x, std::span<const double> params) {
  return fold_point(p, x, params, [](std::size_t, OpKind k, double a, double b) {
    return k == OpKind::Add ? a + b : a * b;
  });
}

}  // namespace rinv
