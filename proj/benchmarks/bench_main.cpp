#include <random>

#include <benchmark/benchmark.h>

#include "ddosc/closed_propagator.hpp"
#include "ddosc/oracle.hpp"
#include "ddosc/quartic.hpp"
#include "ddosc/schedule.hpp"

using namespace ddosc;

namespace {

PhysicalParams memory_params() {
  PhysicalParams p;
  p.Gamma = 15.0;
  p.gamma_bath = 1.0;
  return p;
}

void BM_SolveQuartic(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<QuarticCoeffs> qs;
  for (int i = 0; i < 256; ++i)
    qs.push_back(QuarticCoeffs::from_monic({u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)},
                                           {u(rng), u(rng)}));
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_quartic(qs[k++ % qs.size()]));
}
BENCHMARK(BM_SolveQuartic);

void BM_CompanionRoots(benchmark::State& state) {
  const cplx a{0.3, -0.2}, b{0.5, 0.1}, c{-0.7, 0.4}, d{0.2, 0.9};
  for (auto _ : state) benchmark::DoNotOptimize(companion_roots(a, b, c, d));
}
BENCHMARK(BM_CompanionRoots);

void BM_PropagateRegular(benchmark::State& state) {
  const auto p = memory_params();
  const auto s = regular_schedule(25.0, 0.243, 0.27, 20.0);
  const auto grid = uniform_grid(20.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(propagate(p, s, MatchingMode::kernel_continuous, grid));
}
BENCHMARK(BM_PropagateRegular)->Arg(201)->Arg(2001)->Unit(benchmark::kMillisecond);

void BM_KernelRK4(benchmark::State& state) {
  const auto p = memory_params();
  const auto s = free_schedule(20.0);
  const auto grid = uniform_grid(20.0, 201);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_kernel(p, s, grid, {1e-3}));
}
BENCHMARK(BM_KernelRK4)->Unit(benchmark::kMillisecond);

void BM_FilterFunction(benchmark::State& state) {
  const auto s = regular_schedule(25.0, 0.135, 0.27, 20.0);
  double w = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter_function(s, w, 20.0));
    w += 0.01;
  }
}
BENCHMARK(BM_FilterFunction);

}  // namespace
BENCHMARK_MAIN();
