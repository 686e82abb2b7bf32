// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rinv/bounds.hpp"
#include "rinv/intervalgen.hpp"

namespace rinv {

/// Polynomial evaluated by Horner's scheme over the basis; `degree` counts
/// coefficients minus one.
struct CandidatePoly {
  PolyBasis basis = PolyBasis::Dense;
  std::vector<double> coefficients;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  std::vector<int> exponents() const { return basis_exponents(basis, coefficients.size()); }
  ExprProgram program() const { return horner(basis, coefficients); }

  friend bool operator==(const CandidatePoly& a, const CandidatePoly& b);
};

struct DegreePolicy {
  int start_degree = -1;  // -1: derived from the format precision
  int max_degree = 8;
  std::optional<PolyBasis> basis;  // unset: dense
};

/// Smallest degree with one coefficient per two bits of the round-to-odd
/// precision.
int default_start_degree(FloatFormat format);

/// Output range of the polynomial at x under the flavor's evaluator.
BoundedValue poly_image(const ExprProgram& p, double x, Flavor flavor);

/// Indices of constraints the program violates under the flavor's evaluator.
std::vector<std::size_t> violated_constraints(const ExprProgram& p, std::span<const ReducedConstraint> cs,
                                              Flavor flavor, unsigned workers);

struct GenerationStats {
  int degree = 0;
  std::size_t rounds = 0;
  std::size_t lp_rows = 0;
  std::size_t pivots = 0;
};

struct GenerationResult {
  CandidatePoly poly;
  GenerationStats stats;
};

class Ungeneratable : public std::runtime_error {
 public:
  Ungeneratable(const std::string& what, std::vector<std::uint64_t> inputs)
      : std::runtime_error(what), inputs_(std::move(inputs)) {}
  const std::vector<std::uint64_t>& inputs() const { return inputs_; }

 private:
  std::vector<std::uint64_t> inputs_;
};

/// Finds binary64 coefficients whose flavor evaluation satisfies every
/// constraint, escalating the degree when the LP becomes infeasible.
GenerationResult generate(std::span<const ReducedConstraint> constraints, Flavor flavor,
                          const DegreePolicy& policy, unsigned workers = 1);

}  // namespace rinv
