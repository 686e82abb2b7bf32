// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "rinv/bounds.hpp"
#include "rinv/oracle.hpp"
#include "rinv/reduction.hpp"

namespace rinv {

/// How a kernel's polynomial and output compensation are evaluated, which
/// fixes how reduced intervals and polynomials are checked.
///   rio:     every operation through rza/rzm (round toward zero)
///   riib:    native operations; checked with worst-case directed bounds
///   rn-only: native operations; checked under round-to-nearest only
enum class Flavor : std::uint8_t { RIO, RIIB, RnOnly };

std::string_view to_string(Flavor f);
Flavor parse_flavor(std::string_view text);

struct ReducedConstraint {
  double x_prime;
  double l_prime;
  double h_prime;
  std::uint64_t input;
};

class InfeasibleInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonMonotoneCompensation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Range [lo, hi] of outputs of OC(y') under the flavor's evaluator; a
/// point for rio and rn-only.
BoundedValue oc_image(const ExprProgram& oc, double y, std::span<const double> params, Flavor flavor);

/// Maximal [l', h'] around a seed such that every y' in it maps into
/// `target` under the flavor's evaluator of `oc`.
ReducedConstraint reduce_interval(std::uint64_t input, double x_prime, const RoundingInterval& target,
                                  const ExprProgram& oc, std::span<const double> params, Flavor flavor);

/// Input bits mapped straight to a binary64 output.
struct SpecialCase {
  std::uint64_t input;
  std::uint64_t output;
};

/// Consecutive inputs from `first` to `last` (in value order) that all
/// return `output`; key_lo/key_hi are the fp_key of their binary64 values.
struct ConstantRegion {
  std::uint64_t first;
  std::uint64_t last;
  std::int64_t key_lo;
  std::int64_t key_hi;
  std::uint64_t output;
};

/// Shortest run of consecutive inputs worth a constant region.
inline constexpr std::size_t kMinRegionRun = 8;

struct ConstraintFile {
  Function fn;
  FloatFormat format;
  ReductionKind reduction;
  Flavor flavor;
  std::vector<ReducedConstraint> constraints;  // sorted by x', one per x'
  std::vector<SpecialCase> specials;          // sorted by input bits
  std::vector<ConstantRegion> regions;        // sorted by key
};

/// Splits the oracle output into constant regions, special cases and
/// merged per-x' reduced constraints.
ConstraintFile generate_constraints(const IntervalFile& oracle, Flavor flavor, unsigned workers);
ConstraintFile generate_constraints(const IntervalFile& oracle, Flavor flavor, ReductionKind reduction,
                                    unsigned workers);

void write_constraint_file(std::ostream& os, const ConstraintFile& file);
ConstraintFile read_constraint_file(std::istream& is);

}  // namespace rinv
