// Serial reference kernels against the OpenMP/FFT implementations.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "vlp/lpaley.hpp"
#include "vlp/maximal.hpp"
#include "vlp/reference.hpp"

namespace {

vlp::GridFunction random_function(const vlp::GridPtr& g, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(g->cells());
  for (auto& x : v) x = u(gen);
  return vlp::GridFunction(g, std::move(v));
}

vlp::GridPtr grid_for(const benchmark::State& state) {
  return vlp::share(vlp::Grid::uniform(-8.0, 8.0, static_cast<std::size_t>(state.range(0))));
}

void BM_MaximalReference(benchmark::State& state) {
  const auto f = random_function(grid_for(state), 1);
  const vlp::MaximalSpec spec{true, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(vlp::reference::maximal(f, spec));
  state.SetComplexityN(state.range(0));
}

void BM_Maximal(benchmark::State& state) {
  const auto f = random_function(grid_for(state), 1);
  const vlp::MaximalSpec spec{true, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(vlp::maximal(f, spec));
  state.SetComplexityN(state.range(0));
}

void BM_ConvolveReference(benchmark::State& state) {
  const auto g = grid_for(state);
  const auto f = random_function(g, 2);
  const double h = g->spacing(0);
  const auto k = vlp::sample_kernel([](double x) { return std::exp(-x * x); }, 2.0, h);
  const auto offset = static_cast<std::ptrdiff_t>(std::lround(k.grid().center(0, 0) / h));
  for (auto _ : state) benchmark::DoNotOptimize(vlp::reference::convolve(f.values(), k.values(), offset, h));
}

void BM_ConvolveDirect(benchmark::State& state) {
  const auto g = grid_for(state);
  const auto f = random_function(g, 2);
  const auto k = vlp::sample_kernel([](double x) { return std::exp(-x * x); }, 2.0, g->spacing(0));
  for (auto _ : state) benchmark::DoNotOptimize(vlp::convolve(f, k, vlp::ConvolutionMethod::direct));
}

void BM_ConvolveFFT(benchmark::State& state) {
  const auto g = grid_for(state);
  const auto f = random_function(g, 2);
  const auto k = vlp::sample_kernel([](double x) { return std::exp(-x * x); }, 2.0, g->spacing(0));
  for (auto _ : state) benchmark::DoNotOptimize(vlp::convolve(f, k, vlp::ConvolutionMethod::fft));
}

}  // namespace

BENCHMARK(BM_MaximalReference)->RangeMultiplier(2)->Range(256, 1024)->Complexity();
BENCHMARK(BM_Maximal)->RangeMultiplier(4)->Range(256, 4096)->Complexity();
BENCHMARK(BM_ConvolveReference)->RangeMultiplier(4)->Range(1024, 16384);
BENCHMARK(BM_ConvolveDirect)->RangeMultiplier(4)->Range(1024, 16384);
BENCHMARK(BM_ConvolveFFT)->RangeMultiplier(4)->Range(1024, 16384);

BENCHMARK_MAIN();
