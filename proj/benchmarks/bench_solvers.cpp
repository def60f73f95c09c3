#include <benchmark/benchmark.h>

#include "jamsim/diffusion.hpp"
#include "jamsim/fluid.hpp"
#include "jamsim/kernel.hpp"

namespace {

void BM_FluidSolve(benchmark::State& state) {
  const double dt = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    const auto sol =
        jamsim::solve_fluid([](double z) { return 1.0 - z; }, dt, 4.0);
    benchmark::DoNotOptimize(sol.hitting_time());
  }
}
BENCHMARK(BM_FluidSolve)->Arg(1000)->Arg(10000);

void BM_VarianceSolve(benchmark::State& state) {
  const auto kernel = jamsim::make_er_kernel(1000, 1.0);
  const auto fluid = jamsim::solve_fluid(*kernel, 1e-3, 4.0);
  for (auto _ : state) {
    const auto sol = jamsim::solve_variance_ode(fluid, *kernel);
    benchmark::DoNotOptimize(sol.sigma_sq);
  }
}
BENCHMARK(BM_VarianceSolve);

void BM_SdePaths(benchmark::State& state) {
  const auto kernel = jamsim::make_er_kernel(1000, 1.0);
  const auto fluid = jamsim::solve_fluid(*kernel, 1e-3, 4.0);
  for (auto _ : state) {
    const auto pm =
        jamsim::simulate_w_paths(fluid, *kernel, 1e-3, state.range(0), 5, 1);
    benchmark::DoNotOptimize(pm.var.back());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SdePaths)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
