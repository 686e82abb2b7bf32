// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0
//
// rinv: oracle, reduced-interval and polynomial generation, verification and
// benchmarking of rounding-invariant exp2/log2 kernels.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rinv/parallel.hpp"
#include "rinv/pipeline.hpp"

namespace {

using namespace rinv;

FloatFormat format_from(const std::vector<std::string>& parts) {
  std::string text;
  for (const auto& p : parts) text += (text.empty() ? "" : " ") + p;
  return FloatFormat::parse(text);
}

template <class T>
void write_file(const std::string& path, const T& writer) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  writer(os);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  return is;
}

// "A..B" total widths; B may be "n". A single number selects one width.
std::vector<int> parse_targets(const std::string& spec, FloatFormat f) {
  auto parse_width = [&](std::string_view s) {
    if (s == "n") return f.total_bits();
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("bad target width: " + std::string(s));
    return v;
  };
  int lo, hi;
  if (const auto dots = spec.find(".."); dots != std::string::npos) {
    lo = parse_width(std::string_view(spec).substr(0, dots));
    hi = parse_width(std::string_view(spec).substr(dots + 2));
  } else {
    lo = hi = parse_width(spec);
  }
  const int e = f.exponent_bits();
  if (lo < e + 2 || hi > f.total_bits() || lo > hi) {
    throw std::invalid_argument("target widths must lie in " + std::to_string(e + 2) + ".." +
                                std::to_string(f.total_bits()));
  }
  std::vector<int> precisions;
  for (int w = lo; w <= hi; ++w) precisions.push_back(w - e);
  return precisions;
}

std::vector<fenv::AmbientMode> parse_modes(const std::string& spec) {
  if (spec == "all") return {fenv::kAllModes.begin(), fenv::kAllModes.end()};
  std::vector<fenv::AmbientMode> out;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(fenv::parse_mode(item));
  return out;
}

DegreePolicy policy_from(int degree, int max_degree, const std::string& basis) {
  DegreePolicy p;
  p.start_degree = degree;
  p.max_degree = max_degree;
  if (!basis.empty()) p.basis = parse_basis(basis);
  return p;
}

void print_build(const BuildResult& b) {
  std::cout << "kernel " << to_string(b.artifact.fn) << ' ' << b.artifact.format.to_string() << ' '
            << to_string(b.artifact.flavor) << ": degree " << b.stats.degree << " (" << to_string(b.artifact.poly.basis)
            << "), " << b.constraints.constraints.size() << " reduced constraints, " << b.artifact.specials.size()
            << " special cases, " << b.artifact.regions.size() << " constant regions, " << b.stats.rounds
            << " LP rounds, " << b.stats.lp_rows << " LP rows\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rounding-invariant elementary function kernel generator"};
  app.require_subcommand(1);
  unsigned workers = default_workers();
  std::uint64_t seed = 1;
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed for randomized steps");

  std::string fn_name = "exp2";
  std::vector<std::string> format_parts{"e5", "m9"};
  std::string flavor_name = "riib";
  std::string out_path;
  int degree = -1;
  int max_degree = 8;
  std::string basis;

  auto* oracle_cmd = app.add_subcommand("oracle", "Round-to-odd oracle intervals for every input");
  oracle_cmd->add_option("--fn", fn_name, "exp2 or log2")->required();
  oracle_cmd->add_option("--format", format_parts, "Input format, e.g. \"e5 m9\"")->required()->expected(1, 2);
  oracle_cmd->add_option("--out", out_path, "Interval file")->required();

  std::string oracle_path;
  std::string oc_name;
  auto* intervals_cmd = app.add_subcommand("intervals", "Reduced intervals from an oracle file");
  intervals_cmd->add_option("--oracle", oracle_path, "Interval file")->required();
  intervals_cmd->add_option("--oc", oc_name, "Range reduction / output compensation id");
  intervals_cmd->add_option("--flavor", flavor_name, "riib, rio or rn-only");
  intervals_cmd->add_option("--out", out_path, "Constraint file")->required();

  std::string constraints_path;
  auto* polygen_cmd = app.add_subcommand("polygen", "Polynomial generation from a constraint file");
  polygen_cmd->add_option("--constraints", constraints_path, "Constraint file")->required();
  polygen_cmd->add_option("--flavor", flavor_name, "Must match the constraint file");
  polygen_cmd->add_option("--out", out_path, "Kernel artifact (JSON)")->required();

  std::string oracle_out, constraints_out;
  auto* build_cmd = app.add_subcommand("build", "All stages end to end");
  build_cmd->add_option("--fn", fn_name, "exp2 or log2")->required();
  build_cmd->add_option("--format", format_parts, "Input format, e.g. \"e5 m9\"")->required()->expected(1, 2);
  build_cmd->add_option("--flavor", flavor_name, "riib, rio or rn-only");
  build_cmd->add_option("--out", out_path, "Kernel artifact (JSON)");
  build_cmd->add_option("--oracle-out", oracle_out, "Also write the interval file");
  build_cmd->add_option("--constraints-out", constraints_out, "Also write the constraint file");

  for (auto* cmd : {polygen_cmd, build_cmd}) {
    cmd->add_option("--degree", degree, "Starting degree (default from the format precision)");
    cmd->add_option("--max-degree", max_degree, "Degree cap");
    cmd->add_option("--basis", basis, "dense, even, odd or noconst");
  }

  std::string artifact_path;
  std::string modes_spec = "all";
  std::string targets_spec;
  std::string json_path;
  auto* verify_cmd = app.add_subcommand("verify", "Exhaustive check of a kernel artifact");
  verify_cmd->add_option("--artifact", artifact_path, "Kernel artifact")->required();
  verify_cmd->add_option("--modes", modes_spec, "all or a list such as rn,rd");
  verify_cmd->add_option("--targets", targets_spec, "Target widths A..B in bits (B may be n)");
  verify_cmd->add_option("--json", json_path, "Write the machine-readable summary here");

  std::string baseline_name = "fesetround";
  std::uint64_t calls = 1'000'000;
  auto* bench_cmd = app.add_subcommand("bench", "Kernel timing against a mode-switching baseline");
  bench_cmd->add_option("--artifact", artifact_path, "Kernel artifact")->required();
  bench_cmd->add_option("--baseline", baseline_name, "fesetround, fastmxcsr or none");
  bench_cmd->add_option("--calls", calls, "Minimum timed calls per measurement");
  bench_cmd->add_option("--json", json_path, "Write a JSON summary here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (oracle_cmd->parsed()) {
      const IntervalFile f = generate_intervals(parse_function(fn_name), format_from(format_parts), workers);
      write_file(out_path, [&](std::ostream& os) { write_interval_file(os, f); });
      std::cout << "wrote " << f.records.size() << " intervals to " << out_path << '\n';
    } else if (intervals_cmd->parsed()) {
      auto is = open_input(oracle_path);
      const IntervalFile oracle = read_interval_file(is);
      const ReductionKind oc = oc_name.empty() ? default_reduction(oracle.fn) : parse_reduction(oc_name);
      const ConstraintFile cf = generate_constraints(oracle, parse_flavor(flavor_name), oc, workers);
      write_file(out_path, [&](std::ostream& os) { write_constraint_file(os, cf); });
      std::cout << "wrote " << cf.constraints.size() << " reduced constraints, " << cf.specials.size()
                << " special cases, " << cf.regions.size() << " constant regions to " << out_path << '\n';
    } else if (polygen_cmd->parsed()) {
      auto is = open_input(constraints_path);
      const ConstraintFile cf = read_constraint_file(is);
      if (polygen_cmd->count("--flavor") && parse_flavor(flavor_name) != cf.flavor) {
        throw std::runtime_error("constraint file was generated for flavor " + std::string(to_string(cf.flavor)) +
                                 "; rerun intervals with --flavor " + flavor_name);
      }
      const BuildResult b = build_from_constraints(cf, policy_from(degree, max_degree, basis), workers);
      save_artifact(out_path, b.artifact);
      print_build(b);
    } else if (build_cmd->parsed()) {
      const Function fn = parse_function(fn_name);
      const FloatFormat format = format_from(format_parts);
      const Flavor flavor = parse_flavor(flavor_name);
      const IntervalFile oracle = generate_intervals(fn, format, workers);
      if (!oracle_out.empty()) write_file(oracle_out, [&](std::ostream& os) { write_interval_file(os, oracle); });
      const BuildResult b = build_from_oracle(oracle, flavor, policy_from(degree, max_degree, basis), workers);
      if (!constraints_out.empty()) {
        write_file(constraints_out, [&](std::ostream& os) { write_constraint_file(os, b.constraints); });
      }
      if (out_path.empty()) {
        out_path = std::string(to_string(fn)) + "_e" + std::to_string(format.exponent_bits()) + "m" +
                   std::to_string(format.precision()) + "_" + std::string(to_string(flavor)) + ".json";
      }
      save_artifact(out_path, b.artifact);
      print_build(b);
      std::cout << "wrote " << out_path << '\n';
    } else if (verify_cmd->parsed()) {
      const KernelArtifact k = load_artifact(artifact_path);
      const std::vector<int> targets =
          targets_spec.empty() ? all_target_precisions(k.format) : parse_targets(targets_spec, k.format);
      const ReferenceTable ref(k.fn, k.format, targets, workers);
      const std::vector<fenv::AmbientMode> modes = parse_modes(modes_spec);
      const VerifyReport r = verify(k, ref, modes, workers);
      std::cout << r.to_text();
      if (!json_path.empty()) write_file(json_path, [&](std::ostream& os) { os << r.to_json(); });
      return r.passed() ? 0 : 1;
    } else if (bench_cmd->parsed()) {
      const KernelArtifact k = load_artifact(artifact_path);
      const Kernel kernel(k);
      const std::vector<double> inputs = bench_inputs(k);
      const Baseline baseline = parse_baseline(baseline_name);
      const BenchResult own = bench_kernel(kernel, inputs, Baseline::None, calls);
      std::cout << "kernel " << to_string(k.fn) << ' ' << k.format.to_string() << ' ' << to_string(k.flavor)
                << ": " << own.ns_per_call << " ns/call";
      if (has_cycle_counter()) std::cout << ", " << own.cycles_per_call << " cycles/call";
      std::cout << " (median, " << own.calls << " calls)\n";
      double ratio = 0;
      BenchResult base;
      if (baseline != Baseline::None) {
        base = bench_kernel(kernel, inputs, baseline, calls);
        ratio = base.ns_per_call / own.ns_per_call;
        std::cout << "baseline " << to_string(baseline) << ": " << base.ns_per_call << " ns/call";
        if (has_cycle_counter()) std::cout << ", " << base.cycles_per_call << " cycles/call";
        std::cout << "\nspeedup " << ratio << "x\n";
      }
      const double switch_ns = bench_mode_switch() / 2;
      std::cout << "mode switch latency " << switch_ns << " ns\n";
      if (!json_path.empty()) {
        write_file(json_path, [&](std::ostream& os) {
          os << "{\n  \"kernel_ns\": " << own.ns_per_call << ",\n  \"kernel_cycles\": " << own.cycles_per_call
             << ",\n  \"baseline\": \"" << to_string(baseline) << "\",\n  \"baseline_ns\": " << base.ns_per_call
             << ",\n  \"speedup\": " << ratio << ",\n  \"mode_switch_ns\": " << switch_ns << "\n}\n";
        });
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (const auto* u = dynamic_cast<const Ungeneratable*>(&e)) {
      std::cerr << "violating inputs:";
      for (std::size_t i = 0; i < u->inputs().size() && i < 32; ++i) std::cerr << ' ' << to_hex(u->inputs()[i], 4);
      std::cerr << '\n';
    }
    return 2;
  }
  return 0;
}
