#include <benchmark/benchmark.h>

#include "jamsim/chain.hpp"
#include "jamsim/graph_explore.hpp"
#include "jamsim/kernel.hpp"

namespace {

void BM_SimulateChain(benchmark::State& state) {
  const auto kernel = jamsim::make_er_kernel(state.range(0), 1.0);
  jamsim::Trajectory traj;
  std::uint64_t run = 0;
  for (auto _ : state) {
    jamsim::simulate_into(*kernel, 1, run++, traj);
    benchmark::DoNotOptimize(traj.hitting_step);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateChain)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_BinomialSampler(benchmark::State& state) {
  // mean = range is the regime switch: < 10 inversion, >= 10 rejection
  const std::int64_t n = 100000;
  const double p = static_cast<double>(state.range(0)) / static_cast<double>(n);
  jamsim::Rng rng(7, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jamsim::sample_binomial(n, p, rng));
  }
}
BENCHMARK(BM_BinomialSampler)->Arg(1)->Arg(8)->Arg(50)->Arg(5000);

void BM_GraphExplore(benchmark::State& state) {
  std::uint64_t run = 0;
  for (auto _ : state) {
    const auto out = jamsim::explore_er_graph(state.range(0), 2.0, 3, run++);
    benchmark::DoNotOptimize(out.active_count);
  }
}
BENCHMARK(BM_GraphExplore)->Arg(200)->Arg(1000)->Arg(20000);

}  // namespace

BENCHMARK_MAIN();
