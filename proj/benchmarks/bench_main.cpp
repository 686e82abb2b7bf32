// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <vector>

#include "rinv/eft.hpp"
#include "rinv/fenv.hpp"
#include "rinv/pipeline.hpp"
#include "rinv/runtime.hpp"

using namespace rinv;

namespace {

std::vector<double> operands(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-4.0, 4.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

template <class Op>
void run_binary(benchmark::State& state, Op op) {
  const auto a = operands(4096, 1), b = operands(4096, 2);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(op(a[i], b[i]));
    i = (i + 1) & 4095;
  }
}

void BM_NativeAdd(benchmark::State& s) { run_binary(s, [](double x, double y) { return x + y; }); }
void BM_Rza(benchmark::State& s) { run_binary(s, eft::rza); }
void BM_Rzm(benchmark::State& s) { run_binary(s, eft::rzm); }
void BM_AddDown(benchmark::State& s) {
  run_binary(s, [](double x, double y) { return eft::add_dir(x, y, eft::Direction::Down); });
}
void BM_MulUp(benchmark::State& s) {
  run_binary(s, [](double x, double y) { return eft::mul_dir(x, y, eft::Direction::Up); });
}

const KernelArtifact& artifact(Function fn, Flavor flavor) {
  static std::map<std::pair<Function, Flavor>, KernelArtifact> cache;
  auto it = cache.find({fn, flavor});
  if (it == cache.end()) {
    PipelineConfig cfg;
    cfg.fn = fn;
    cfg.format = FloatFormat(5, 9);
    cfg.flavor = flavor;
    it = cache.emplace(std::pair{fn, flavor}, build(cfg).artifact).first;
  }
  return it->second;
}

void BM_Kernel(benchmark::State& state, Function fn, Flavor flavor, bool wrap) {
  const KernelArtifact& a = artifact(fn, flavor);
  const Kernel k(a);
  const std::vector<double> in = bench_inputs(a);
  std::size_t i = 0;
  for (auto _ : state) {
    if (wrap) {
      const fenv::AmbientMode old = fenv::get_mode();
      fenv::set_mode(fenv::AmbientMode::RN);
      benchmark::DoNotOptimize(k.eval(in[i]));
      fenv::set_mode(old);
    } else {
      benchmark::DoNotOptimize(k.eval(in[i]));
    }
    if (++i == in.size()) i = 0;
  }
}

void BM_ModeSwitch(benchmark::State& state) {
  for (auto _ : state) {
    fenv::set_mode(fenv::AmbientMode::RD);
    fenv::set_mode(fenv::AmbientMode::RN);
  }
}

}  // namespace

BENCHMARK(BM_NativeAdd);
BENCHMARK(BM_Rza);
BENCHMARK(BM_Rzm);
BENCHMARK(BM_AddDown);
BENCHMARK(BM_MulUp);
BENCHMARK_CAPTURE(BM_Kernel, exp2_riib, Function::Exp2, Flavor::RIIB, false);
BENCHMARK_CAPTURE(BM_Kernel, exp2_rio, Function::Exp2, Flavor::RIO, false);
BENCHMARK_CAPTURE(BM_Kernel, exp2_fesetround, Function::Exp2, Flavor::RIIB, true);
BENCHMARK_CAPTURE(BM_Kernel, log2_riib, Function::Log2, Flavor::RIIB, false);
BENCHMARK_CAPTURE(BM_Kernel, log2_rio, Function::Log2, Flavor::RIO, false);
BENCHMARK_CAPTURE(BM_Kernel, log2_fesetround, Function::Log2, Flavor::RIIB, true);
BENCHMARK(BM_ModeSwitch);
BENCHMARK_MAIN();
