#include <benchmark/benchmark.h>

#include "bcs/boundary3d.hpp"
#include "bcs/bs_solver.hpp"
#include "bcs/kernels.hpp"

namespace {

void BM_kt(benchmark::State& state) {
  const bcs::KernelParams P(1e-3, 1.0);
  double a = -0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bcs::kernels::kt(a, 0.7 - a, P));
    a += 1e-9;
  }
}
BENCHMARK(BM_kt);

void BM_t1(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(bcs::boundary::t_j(x, 1));
}
BENCHMARK(BM_t1)->Arg(5)->Arg(50)->Arg(200);

void BM_build_matrix(benchmark::State& state) {
  const bcs::RadialPotential V(bcs::Gaussian{1.0, 1.0}, bcs::Dimension(3));
  const bcs::KernelParams P(1e-3, 1.0);
  const auto grid = bcs::bs::grid_for(V, P, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bcs::bs::build_matrix(V, P, grid));
  state.counters["n"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_build_matrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_top_eigenvalue(benchmark::State& state) {
  const bcs::RadialPotential V(bcs::Gaussian{1.0, 1.0}, bcs::Dimension(3));
  const bcs::KernelParams P(1e-3, 1.0);
  const auto S = bcs::bs::build_matrix(V, P, bcs::bs::grid_for(V, P));
  for (auto _ : state) benchmark::DoNotOptimize(bcs::bs::top_eigenvalue(S));
}
BENCHMARK(BM_top_eigenvalue)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
