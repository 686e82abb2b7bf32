// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "rinv/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cfenv>
#include <chrono>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "rinv/parallel.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <x86intrin.h>
#define RINV_HAVE_RDTSC 1
#else
#define RINV_HAVE_RDTSC 0
#endif

namespace rinv {

PolyBasis default_basis(Function fn) {
  return fn == Function::Exp2 ? PolyBasis::Dense : PolyBasis::NoConstant;
}

DegreePolicy resolve_policy(Function fn, FloatFormat format, DegreePolicy requested) {
  if (!requested.basis) requested.basis = default_basis(fn);
  if (requested.start_degree < 0) requested.start_degree = default_start_degree(format);
  return requested;
}

BuildResult build_from_constraints(const ConstraintFile& cf, const DegreePolicy& degree, unsigned workers) {
  DegreePolicy policy = resolve_policy(cf.fn, cf.format, degree);
  GenerationResult g = generate(cf.constraints, cf.flavor, policy, workers);
  KernelArtifact artifact = assemble(cf, g.poly);
  return {cf, g.stats, std::move(artifact)};
}

BuildResult build_from_oracle(const IntervalFile& oracle, Flavor flavor, const DegreePolicy& degree,
                              unsigned workers) {
  return build_from_constraints(generate_constraints(oracle, flavor, workers), degree, workers);
}

BuildResult build(const PipelineConfig& config) {
  const IntervalFile oracle = generate_intervals(config.fn, config.format, config.workers);
  return build_from_oracle(oracle, config.flavor, config.degree, config.workers);
}

std::vector<int> all_target_precisions(FloatFormat format) {
  std::vector<int> t;
  for (int p = 2; p <= format.precision(); ++p) t.push_back(p);
  return t;
}

ReferenceTable::ReferenceTable(Function fn, FloatFormat format, std::vector<int> targets, unsigned workers)
    : fn_(fn), format_(format), targets_(std::move(targets)) {
  const std::size_t n = input_count();
  const std::size_t per = targets_.size() * kStandardRoundings.size();
  table_.resize(n * per);
  std::vector<FloatFormat> outs;
  for (int p : targets_) outs.emplace_back(format.exponent_bits(), p);
  parallel_shards(n, workers, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t i = begin; i < end; ++i) {
      oracle::Reference ref(fn, SoftValue(format, i));
      for (std::size_t t = 0; t < outs.size(); ++t) {
        for (std::size_t m = 0; m < kStandardRoundings.size(); ++m) {
          table_[i * per + t * kStandardRoundings.size() + m] = ref.rounded(outs[t], kStandardRoundings[m]).bits();
        }
      }
    }
  });
}

std::uint64_t VerifyReport::mismatches_under(fenv::AmbientMode mode) const {
  std::uint64_t total = 0;
  for (std::size_t a = 0; a < ambient_modes.size(); ++a) {
    if (ambient_modes[a] != mode) continue;
    for (std::size_t t = 0; t < target_bits.size(); ++t) {
      for (std::size_t m = 0; m < kStandardRoundings.size(); ++m) total += count(a, t, m);
    }
  }
  return total;
}

std::string VerifyReport::to_text() const {
  std::ostringstream os;
  os << "verify " << to_string(fn) << ' ' << format.to_string() << ' ' << to_string(flavor) << ": "
     << checks << " checks, " << mismatches << " incorrect\n";
  for (std::size_t a = 0; a < ambient_modes.size(); ++a) {
    const std::uint64_t n = mismatches_under(ambient_modes[a]);
    os << "  ambient " << to_string(ambient_modes[a]) << ": ";
    if (n == 0) os << "ok\n";
    else os << n << " wrong\n";
  }
  os << "  ambient mode preserved: " << (ambient_preserved && probe_failures == 0 ? "yes" : "no") << '\n';
  const int w = format.hex_width();
  for (const Mismatch& m : examples) {
    os << "  input " << to_hex(m.input, w) << " ambient " << to_string(m.ambient) << " target " << m.target_bits
       << " bits " << to_string(m.final_mode) << ": kernel " << to_hex(m.output, 16) << " rounds to "
       << to_hex(m.got, (m.target_bits + 3) / 4) << ", expected " << to_hex(m.expected, (m.target_bits + 3) / 4)
       << '\n';
  }
  return os.str();
}

std::string VerifyReport::to_json() const {
  using json = nlohmann::ordered_json;
  json j;
  j["fn"] = to_string(fn);
  j["format"] = format.to_string();
  j["flavor"] = to_string(flavor);
  j["checks"] = checks;
  j["mismatches"] = mismatches;
  j["ambient_preserved"] = ambient_preserved && probe_failures == 0;
  json by = json::object();
  for (std::size_t a = 0; a < ambient_modes.size(); ++a) {
    json per_target = json::object();
    for (std::size_t t = 0; t < target_bits.size(); ++t) {
      json per_mode = json::object();
      for (std::size_t m = 0; m < kStandardRoundings.size(); ++m) {
        per_mode[std::string(to_string(kStandardRoundings[m]))] = count(a, t, m);
      }
      per_target[std::to_string(target_bits[t])] = per_mode;
    }
    by[std::string(to_string(ambient_modes[a]))] = per_target;
  }
  j["mismatch_counts"] = by;
  json ex = json::array();
  for (const Mismatch& m : examples) {
    ex.push_back({{"input", to_hex(m.input, format.hex_width())},
                  {"ambient", to_string(m.ambient)},
                  {"target_bits", m.target_bits},
                  {"final_mode", to_string(m.final_mode)},
                  {"output", to_hex(m.output, 16)},
                  {"got", to_hex(m.got, 16)},
                  {"expected", to_hex(m.expected, 16)}});
  }
  j["examples"] = ex;
  return j.dump(2) + "\n";
}

VerifyReport verify(const KernelArtifact& artifact, const ReferenceTable& reference,
                    std::span<const fenv::AmbientMode> modes, unsigned workers) {
  if (artifact.fn != reference.fn() || !(artifact.format == reference.format())) {
    throw std::invalid_argument("verify: reference table does not match the artifact");
  }
  const Kernel kernel(artifact);
  const FloatFormat f = artifact.format;
  const std::size_t n = reference.input_count();
  const auto& targets = reference.target_precisions();
  std::vector<FloatFormat> outs;
  for (int p : targets) outs.emplace_back(f.exponent_bits(), p);

  VerifyReport report{artifact.fn, f, artifact.flavor, {modes.begin(), modes.end()}, {}, {}, 0, 0, 0, true, {}};
  for (const FloatFormat& o : outs) report.target_bits.push_back(o.total_bits());
  report.counts.assign(modes.size() * targets.size() * kStandardRoundings.size(), 0);

  const fenv::AmbientMode before = fenv::get_mode();
  std::vector<double> outputs(n);
  std::atomic<std::uint64_t> probe_failures{0};
  for (std::size_t a = 0; a < modes.size(); ++a) {
    const fenv::AmbientMode mode = modes[a];
    parallel_shards(n, workers, [&](std::size_t begin, std::size_t end, unsigned) {
      fenv::with_mode(mode, [&] {
        if (fenv::probe_mode() != mode) ++probe_failures;
        for (std::size_t i = begin; i < end; ++i) outputs[i] = kernel.eval_bits(i);
        if (fenv::probe_mode() != mode || fenv::get_mode() != mode) ++probe_failures;
      });
    });
    for (std::size_t i = 0; i < n; ++i) {
      const double w = outputs[i];
      for (std::size_t t = 0; t < outs.size(); ++t) {
        for (std::size_t m = 0; m < kStandardRoundings.size(); ++m) {
          ++report.checks;
          const SoftValue got = round_double(w, outs[t], kStandardRoundings[m]);
          const std::uint64_t want = reference.expected(i, t, m);
          const bool same = got.bits() == want || (got.is_nan() && SoftValue(outs[t], want).is_nan());
          if (same) continue;
          ++report.mismatches;
          ++report.counts[(a * outs.size() + t) * kStandardRoundings.size() + m];
          if (report.examples.size() < 20) {
            report.examples.push_back({i, mode, outs[t].total_bits(), kStandardRoundings[m],
                                       std::bit_cast<std::uint64_t>(w), got.bits(), want});
          }
        }
      }
    }
  }
  report.probe_failures = probe_failures.load();
  report.ambient_preserved = fenv::get_mode() == before && fenv::probe_mode() == before;
  return report;
}

std::string_view to_string(Baseline b) {
  switch (b) {
    case Baseline::None: return "none";
    case Baseline::Fesetround: return "fesetround";
    case Baseline::FastMxcsr: return "fastmxcsr";
  }
  return "?";
}

Baseline parse_baseline(std::string_view text) {
  for (Baseline b : {Baseline::None, Baseline::Fesetround, Baseline::FastMxcsr}) {
    if (text == to_string(b)) return b;
  }
  throw std::invalid_argument("unknown baseline: " + std::string(text));
}

bool has_cycle_counter() { return RINV_HAVE_RDTSC != 0; }

std::vector<double> bench_inputs(const KernelArtifact& artifact) {
  std::vector<double> xs;
  const std::size_t n = std::size_t{1} << artifact.format.total_bits();
  for (std::size_t i = 0; i < n; ++i) {
    const SoftValue v(artifact.format, i);
    if (!v.is_finite()) continue;
    if (artifact.fn == Function::Log2 && (v.is_negative() || v.is_zero())) continue;
    xs.push_back(to_double(v));
  }
  return xs;
}

namespace {

std::uint64_t cycles() {
#if RINV_HAVE_RDTSC
  return __rdtsc();
#else
  return 0;
#endif
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

volatile double g_sink;

template <class Call>
BenchResult time_batches(std::uint64_t min_calls, int batches, Call&& call) {
  batches = std::max(batches, 1);
  const std::uint64_t per = std::max<std::uint64_t>(1, (min_calls + batches - 1) / batches);
  std::vector<double> ns, cyc;
  double acc = 0;
  for (int b = -1; b < batches; ++b) {  // batch -1 is warmup
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t c0 = cycles();
    for (std::uint64_t i = 0; i < per; ++i) acc += call(i);
    const std::uint64_t c1 = cycles();
    const auto t1 = std::chrono::steady_clock::now();
    if (b < 0) continue;
    ns.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count() / static_cast<double>(per));
    cyc.push_back(static_cast<double>(c1 - c0) / static_cast<double>(per));
  }
  g_sink = acc;
  return {median(ns), has_cycle_counter() ? median(cyc) : 0.0, per * static_cast<std::uint64_t>(batches)};
}

}  // namespace

BenchResult bench_kernel(const Kernel& kernel, std::span<const double> inputs, Baseline baseline,
                         std::uint64_t min_calls, int batches) {
  if (inputs.empty()) throw std::invalid_argument("bench: no inputs");
  const std::size_t n = inputs.size();
  switch (baseline) {
    case Baseline::None:
      return time_batches(min_calls, batches, [&](std::uint64_t i) { return kernel.eval(inputs[i % n]); });
    case Baseline::Fesetround:
      return time_batches(min_calls, batches, [&](std::uint64_t i) {
        const int old = std::fegetround();
        std::fesetround(FE_TONEAREST);
        const double y = kernel.eval(inputs[i % n]);
        std::fesetround(old);
        return y;
      });
    case Baseline::FastMxcsr:
      if (!fenv::has_fast_set_mode()) throw std::runtime_error("bench: no direct control-register access here");
      return time_batches(min_calls, batches, [&](std::uint64_t i) {
        const fenv::AmbientMode old = fenv::fast_get_mode();
        fenv::fast_set_mode(fenv::AmbientMode::RN);
        const double y = kernel.eval(inputs[i % n]);
        fenv::fast_set_mode(old);
        return y;
      });
  }
  return {};
}

double bench_mode_switch(std::uint64_t pairs) {
  const BenchResult r = time_batches(pairs, 21, [](std::uint64_t) {
    std::fesetround(FE_DOWNWARD);
    std::fesetround(FE_TONEAREST);
    return 0.0;
  });
  return r.ns_per_call;
}

}  // namespace rinv
