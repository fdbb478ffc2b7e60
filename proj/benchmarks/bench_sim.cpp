#include <benchmark/benchmark.h>

#include "relaylab/mimo.hpp"
#include "relaylab/single_antenna.hpp"

namespace rl = relaylab;

namespace {

rl::McPlan plan_of(std::int64_t trials) {
  rl::McPlan plan;
  plan.trials = trials;
  plan.master_seed = 42;
  return plan;
}

void BM_SimulateDestinationP3(benchmark::State& state) {
  const rl::SingleAntennaConfig cfg = rl::SingleAntennaConfig::unit(7, 0.9, 0.9);
  const rl::McPlan plan = plan_of(state.range(0));
  for (auto _ : state) {
    const rl::EsnrEstimate e = rl::simulate_destination(rl::Protocol::P3, cfg, plan);
    benchmark::DoNotOptimize(e.value);
  }
  state.SetItemsProcessed(state.iterations() * plan.trials);
}
BENCHMARK(BM_SimulateDestinationP3)->Arg(1 << 14);

void BM_CapacityWorst(benchmark::State& state) {
  const rl::SingleAntennaConfig cfg = rl::SingleAntennaConfig::unit(7, 0.9, 0.9);
  const rl::McPlan plan = plan_of(state.range(0));
  for (auto _ : state) {
    const rl::CapacityEstimate c = rl::capacity_worst(rl::Protocol::P1, cfg, plan);
    benchmark::DoNotOptimize(c.bits_per_channel_use);
  }
  state.SetItemsProcessed(state.iterations() * plan.trials);
}
BENCHMARK(BM_CapacityWorst)->Arg(1 << 14);

void BM_SimulateAllSchemes(benchmark::State& state) {
  const rl::MimoConfig cfg =
      rl::MimoConfig::homogeneous(2, static_cast<int>(state.range(0)), 7, 0.9, 0.9);
  const rl::McPlan plan = plan_of(1 << 12);
  for (auto _ : state) {
    const rl::MimoSimResult r = rl::simulate_all_schemes(cfg, plan);
    benchmark::DoNotOptimize(r.s2.value);
  }
  state.SetItemsProcessed(state.iterations() * plan.trials);
}
BENCHMARK(BM_SimulateAllSchemes)->Arg(1)->Arg(2)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
