#include <benchmark/benchmark.h>

#include <cmath>

#include "stochexp/brownian.hpp"
#include "stochexp/feller.hpp"
#include "stochexp/quadrature.hpp"
#include "stochexp/rng.hpp"
#include "stochexp/sde.hpp"
#include "stochexp/stochastic_exponential.hpp"

using namespace stochexp;

static void BM_PhiloxNormal(benchmark::State& state) {
  RngStream s(1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(s.normal());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxNormal);

static void BM_SampleBrownian(benchmark::State& state) {
  const TimeGrid grid = make_grid(1.0, 1e-3);
  std::uint64_t i = 0;
  for (auto _ : state) {
    RngStream s(1, i++);
    benchmark::DoNotOptimize(sample_brownian(grid, s, 1));
  }
}
BENCHMARK(BM_SampleBrownian);

static void BM_SolveQuartic(benchmark::State& state) {
  SdeSpec spec;
  spec.drift = scalar([](double x) { return std::pow(std::abs(x), 4.0) + x; });
  spec.diffusion = scalar([](double) { return 1.0; });
  spec.x0 = {0.0};
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve(spec, SolveConfig{}, RngStream(3, i++), 1.0));
}
BENCHMARK(BM_SolveQuartic)->Unit(benchmark::kMicrosecond);

static void BM_StochasticExponential(benchmark::State& state) {
  RngStream s(4, 0);
  const BrownianPath w = sample_brownian(make_grid(1.0, 1e-3), s, 1);
  for (auto _ : state) benchmark::DoNotOptimize(localized_exponential(w.values, 1, w, 0.5));
}
BENCHMARK(BM_StochasticExponential)->Unit(benchmark::kMicrosecond);

static void BM_FellerQuartic(benchmark::State& state) {
  const Diffusion1D d{[](double x) { return std::pow(std::abs(x), 4.0); }, [](double) { return 1.0; }, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(classify_explosion(d));
}
BENCHMARK(BM_FellerQuartic)->Unit(benchmark::kMillisecond);

static void BM_Quadrature(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate([](double x) { return 1.0 / (1e-4 + (x - 0.3) * (x - 0.3)); }, 0.0, 1.0,
                                       QuadOptions{1e-12, 0.0, 2000}));
}
BENCHMARK(BM_Quadrature)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
