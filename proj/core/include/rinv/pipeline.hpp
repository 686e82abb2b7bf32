// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rinv/fenv.hpp"
#include "rinv/intervalgen.hpp"
#include "rinv/oracle.hpp"
#include "rinv/polygen.hpp"
#include "rinv/runtime.hpp"

namespace rinv {

struct PipelineConfig {
  Function fn = Function::Exp2;
  FloatFormat format = FloatFormat(5, 5);
  Flavor flavor = Flavor::RIIB;
  DegreePolicy degree{};  // start_degree -1 picks the format default
  unsigned workers = 1;
  std::uint64_t seed = 1;
};

/// Basis and start degree used when the caller leaves them unspecified.
DegreePolicy resolve_policy(Function fn, FloatFormat format, DegreePolicy requested);
PolyBasis default_basis(Function fn);

struct BuildResult {
  ConstraintFile constraints;
  GenerationStats stats;
  KernelArtifact artifact;
};

/// Constraint generation and polynomial fitting from an oracle file.
BuildResult build_from_oracle(const IntervalFile& oracle, Flavor flavor, const DegreePolicy& degree,
                              unsigned workers);
/// Polynomial fitting from a constraint file.
BuildResult build_from_constraints(const ConstraintFile& constraints, const DegreePolicy& degree, unsigned workers);
/// All stages.
BuildResult build(const PipelineConfig& config);

/// Correctly rounded results of fn for every input of a format, rounded to
/// each target precision under each final mode.
class ReferenceTable {
 public:
  ReferenceTable(Function fn, FloatFormat format, std::vector<int> target_precisions, unsigned workers);

  Function fn() const { return fn_; }
  const FloatFormat& format() const { return format_; }
  const std::vector<int>& target_precisions() const { return targets_; }
  std::size_t input_count() const { return std::size_t{1} << format_.total_bits(); }

  std::uint64_t expected(std::uint64_t input, std::size_t target, std::size_t mode) const {
    return table_[(input * targets_.size() + target) * kStandardRoundings.size() + mode];
  }

 private:
  Function fn_;
  FloatFormat format_;
  std::vector<int> targets_;
  std::vector<std::uint64_t> table_;
};

/// Target precisions 2..p of the format (total widths e+2..n).
std::vector<int> all_target_precisions(FloatFormat format);

struct Mismatch {
  std::uint64_t input;
  fenv::AmbientMode ambient;
  int target_bits;
  Rounding final_mode;
  std::uint64_t output;  // binary64 bits from the kernel
  std::uint64_t got;
  std::uint64_t expected;
};

struct VerifyReport {
  Function fn;
  FloatFormat format;
  Flavor flavor;
  std::vector<fenv::AmbientMode> ambient_modes;
  std::vector<int> target_bits;  // total widths
  // counts[(a * targets + t) * 4 + m]
  std::vector<std::uint64_t> counts;
  std::uint64_t checks = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t probe_failures = 0;
  bool ambient_preserved = true;
  std::vector<Mismatch> examples;

  std::uint64_t count(std::size_t ambient, std::size_t target, std::size_t mode) const {
    return counts[(ambient * target_bits.size() + target) * kStandardRoundings.size() + mode];
  }
  std::uint64_t mismatches_under(fenv::AmbientMode m) const;
  bool passed() const { return mismatches == 0 && probe_failures == 0 && ambient_preserved; }

  std::string to_text() const;
  std::string to_json() const;
};

/// Every input under every ambient mode, target and final mode. Ambient mode
/// is the outermost loop; each worker owns its own floating-point
/// environment.
VerifyReport verify(const KernelArtifact& artifact, const ReferenceTable& reference,
                    std::span<const fenv::AmbientMode> modes, unsigned workers);

enum class Baseline : std::uint8_t { None, Fesetround, FastMxcsr };
std::string_view to_string(Baseline b);
Baseline parse_baseline(std::string_view text);

struct BenchResult {
  double ns_per_call = 0;      // median over batches
  double cycles_per_call = 0;  // median, 0 without a cycle counter
  std::uint64_t calls = 0;
};

/// Inputs the benchmark sweeps: every finite in-domain value of the format.
std::vector<double> bench_inputs(const KernelArtifact& artifact);

BenchResult bench_kernel(const Kernel& kernel, std::span<const double> inputs, Baseline baseline,
                         std::uint64_t min_calls = 1'000'000, int batches = 21);

/// Median cost of one set-mode call pair (RD then back), ns.
double bench_mode_switch(std::uint64_t pairs = 1'000'000);

bool has_cycle_counter();

}  // namespace rinv
