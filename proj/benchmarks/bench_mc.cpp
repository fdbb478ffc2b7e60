#include <benchmark/benchmark.h>

#include <cmath>

#include "relaylab/mc.hpp"

namespace rl = relaylab;

namespace {

void BM_SampleCGaussian(benchmark::State& state) {
  rl::RandomStream stream = rl::derive_stream(1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rl::sample_cgaussian(1.0, stream));
  }
}
BENCHMARK(BM_SampleCGaussian);

void BM_DeriveStream(benchmark::State& state) {
  std::uint64_t index = 0;
  for (auto _ : state) {
    rl::RandomStream stream = rl::derive_stream(42, index++);
    benchmark::DoNotOptimize(stream.next_u64());
  }
}
BENCHMARK(BM_DeriveStream);

void BM_EstimateMoment(benchmark::State& state) {
  rl::McPlan plan;
  plan.trials = state.range(0);
  plan.master_seed = 7;
  const rl::ExecPolicy exec{static_cast<int>(state.range(1))};
  for (auto _ : state) {
    const rl::MomentEstimate e = rl::estimate_moment(
        [](rl::RandomStream& s) { return std::norm(rl::sample_cgaussian(1.0, s)); }, plan, exec);
    benchmark::DoNotOptimize(e.mean);
  }
  state.SetItemsProcessed(state.iterations() * plan.trials);
}
BENCHMARK(BM_EstimateMoment)->Args({1 << 20, 1})->Args({1 << 20, 2});

}  // namespace

BENCHMARK_MAIN();
