#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "stairbot/kernels.hpp"

using namespace stairbot;

namespace {

std::vector<signal::Sample> noisy_series(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 5.0);
  std::vector<signal::Sample> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 0.25 * static_cast<double>(i);
    s[i] = {t, 50.0 + 20.0 * std::sin(0.1 * t) + noise(rng)};
  }
  return s;
}

std::vector<double> torque_grid() {
  std::vector<double> t;
  for (double x = 20.0; x <= 35.0; x += 0.5) t.push_back(x);
  return t;
}

template <auto Kernel>
void bm_loess(benchmark::State& st) {
  const auto s = noisy_series(static_cast<std::size_t>(st.range(0)));
  signal::LoessConfig cfg;
  cfg.span = 0.1;
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(s, cfg));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <auto Kernel>
void bm_corners(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto f = perception::SmoothTexture(3).render(n, n);
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(f));
  st.SetItemsProcessed(st.iterations() * n * n);
}

template <auto Kernel>
void bm_scan(benchmark::State& st) {
  sim::SimConfig cfg;
  cfg.dt = 2e-3;
  const sim::Staircase stairs;
  const auto torques = torque_grid();
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(cfg, stairs, torques));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(torques.size()));
}

}  // namespace

BENCHMARK(bm_loess<kernels::serial::loess_smooth>)->Name("loess/serial")->Arg(500)->Arg(2000);
BENCHMARK(bm_loess<kernels::omp::loess_smooth>)->Name("loess/omp")->Arg(500)->Arg(2000)->UseRealTime();
BENCHMARK(bm_corners<kernels::serial::corner_scores>)->Name("corners/serial")->Arg(96)->Arg(480);
BENCHMARK(bm_corners<kernels::omp::corner_scores>)->Name("corners/omp")->Arg(96)->Arg(480)->UseRealTime();
BENCHMARK(bm_scan<kernels::serial::torque_scan>)->Name("torque_scan/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(bm_scan<kernels::omp::torque_scan>)->Name("torque_scan/omp")->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
