#include <benchmark/benchmark.h>

#include "wmsim/sim.hpp"
#include "wmsim/trigger.hpp"

using namespace wmsim;

static void BM_TriggerObserve(benchmark::State& state) {
  auto trig = make_trigger(TriggerAlgorithm::FlTrend, TriggerConfig{},
                           FuzzyConfig::defaults());
  Rng rng(3);
  std::vector<RadioSample> stream(1024);
  for (auto& s : stream)
    s = {rng.uniform(45, 110), rng.uniform(0, 30), rng.uniform(0, 150), 0};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(trig->observe(stream[i & 1023], 0.1 * i));
    ++i;
  }
}
BENCHMARK(BM_TriggerObserve);

static void BM_RunScenario(benchmark::State& state) {
  Scenario sc = Scenario::defaults();
  sc.duration_s = static_cast<double>(state.range(0));
  sc.speed_kmph = 20;
  for (auto _ : state) {
    RunResult run = run_scenario(sc);
    benchmark::DoNotOptimize(run.metrics.handover_count);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<long>(sc.duration_s / sc.trigger.update_interval_s));
}
BENCHMARK(BM_RunScenario)->Arg(60)->Arg(600)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
