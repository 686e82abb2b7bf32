// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rinv/intervalgen.hpp"
#include "rinv/polygen.hpp"
#include "rinv/reduction.hpp"

namespace rinv {

/// Everything the evaluator needs for one function and input format.
struct KernelArtifact {
  Function fn = Function::Exp2;
  FloatFormat format = FloatFormat::binary16();
  int ro_bits = 0;
  Flavor flavor = Flavor::RIIB;
  ReductionKind reduction = ReductionKind::Exp2Split;
  CandidatePoly poly;
  std::vector<SpecialCase> specials;    // sorted by input bits
  std::vector<ConstantRegion> regions;  // sorted by key

  /// FNV-1a over the canonical text of every field above.
  std::string digest() const;

  friend bool operator==(const KernelArtifact&, const KernelArtifact&);
};

class DigestMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON text with hex payloads and the digest.
std::string to_json(const KernelArtifact& k);
/// Parses JSON text; throws DigestMismatch when the stored digest does not
/// match the contents.
KernelArtifact artifact_from_json(const std::string& text);

void save_artifact(const std::filesystem::path& path, const KernelArtifact& k);
KernelArtifact load_artifact(const std::filesystem::path& path);

/// Artifact assembled from the constraint file and generated polynomial.
KernelArtifact assemble(const ConstraintFile& constraints, const CandidatePoly& poly);

/// Loaded, immutable evaluator for a KernelArtifact. eval never changes
/// the floating-point environment.
class Kernel {
 public:
  static constexpr std::size_t kMaxCoefficients = 16;

  explicit Kernel(const KernelArtifact& artifact);

  const FloatFormat& format() const { return format_; }
  Flavor flavor() const { return flavor_; }

  /// Binary64 value of an input bit pattern.
  double decode(std::uint64_t bits) const;

  double eval_bits(std::uint64_t bits) const { return eval(decode(bits)); }
  /// x must be a value of the input format.
  double eval(double x) const;

  /// Polynomial stage alone on a reduced input.
  double eval_poly(double x_prime) const;

 private:
  double domain_special(double x, bool& hit) const;

  FloatFormat format_;
  Function fn_;
  Flavor flavor_;
  ReductionKind reduction_;
  PolyBasis basis_;
  std::array<double, kMaxCoefficients> c_{};
  std::size_t count_ = 0;
  std::vector<std::int64_t> special_keys_;
  std::vector<double> special_values_;
  std::vector<ConstantRegion> regions_;
  // Input decoding.
  int frac_bits_;
  std::uint64_t exp_field_max_;
  int bias_;
  double subnormal_scale_;
};

}  // namespace rinv
