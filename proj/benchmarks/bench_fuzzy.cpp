#include <benchmark/benchmark.h>

#include "wmsim/fuzzy.hpp"
#include "wmsim/rng.hpp"

using namespace wmsim;

static void BM_MembershipDegree(benchmark::State& state) {
  auto mf = MembershipFunction::trapezoid(65, 75, 75, 86);
  double x = 60;
  for (auto _ : state) {
    benchmark::DoNotOptimize(membership_degree(mf, x));
    x += 0.37;
    if (x > 95) x = 60;
  }
}
BENCHMARK(BM_MembershipDegree);

static void BM_Infer(benchmark::State& state) {
  FuzzyConfig cfg = FuzzyConfig::defaults();
  Rng rng(1);
  std::vector<InputVector> inputs(1024);
  for (auto& in : inputs)
    in = {rng.uniform(40, 110), rng.uniform(0, 32), rng.uniform(0, 160)};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(infer(inputs[i & 1023], cfg).score);
    ++i;
  }
}
BENCHMARK(BM_Infer);

BENCHMARK_MAIN();
