#include "consgain/experiments.hpp"
#include "consgain/gain.hpp"
#include "consgain/oracle.hpp"
#include "consgain/simulator.hpp"
#include "consgain/spectral.hpp"

#include <benchmark/benchmark.h>

using namespace consgain;

static void BM_Spectrum(benchmark::State& state) {
  const Graph g = build_family(ring_lattice(2, static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(g));
}
BENCHMARK(BM_Spectrum)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMicrosecond);

static void BM_AnalyticGain(benchmark::State& state) {
  double beta = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gain_absolute(0.5857864376, Gains(1.0, beta)));
    benchmark::DoNotOptimize(gain_relative(0.5857864376, Gains(1.0, beta)));
    beta = beta > 10.0 ? 0.05 : beta * 1.01;
  }
}
BENCHMARK(BM_AnalyticGain);

static void BM_DifferenceSurface(benchmark::State& state) {
  const SweepGrid grid;
  for (auto _ : state) benchmark::DoNotOptimize(difference_surface(grid, 0.5857864376));
}
BENCHMARK(BM_DifferenceSurface)->Unit(benchmark::kMillisecond);

static void BM_ModalPeak(benchmark::State& state) {
  const ModalFunction f{Protocol::Absolute, 1.0, Gains(1, 1)};
  for (auto _ : state) benchmark::DoNotOptimize(modal_peak(f));
}
BENCHMARK(BM_ModalPeak)->Unit(benchmark::kMillisecond);

static void BM_FullMatrix(benchmark::State& state) {
  const StateSpace ss = build_state_space(build_family(path(static_cast<std::size_t>(state.range(0)))),
                                          Protocol::Absolute, Gains(1, 1));
  for (auto _ : state) benchmark::DoNotOptimize(hinf_fullmatrix(ss));
}
BENCHMARK(BM_FullMatrix)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Simulate(benchmark::State& state) {
  const Graph g = build_family(path(8));
  Disturbance d;
  d.frequency = 0.5;
  d.t_on = 20.0;
  d.weights = Eigen::VectorXd::Unit(8, 0);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(g, Protocol::Relative, Gains(1, 1), d, zero, zero, 40.0, 0.01,
                                      {.keep_trajectories = false}));
  }
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
