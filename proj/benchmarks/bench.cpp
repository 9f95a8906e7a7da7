#include <benchmark/benchmark.h>

#include <random>

#include "wvf/ensemble.hpp"

namespace {

wvf::DiscreteMeasure random_measure(std::size_t n, std::size_t d, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> pos(-1.0, 1.0);
  std::vector<wvf::Vec> points(n, wvf::Vec(d));
  for (auto& x : points)
    for (auto& c : x) c = pos(rng);
  return wvf::DiscreteMeasure::uniform(std::move(points));
}

void BM_Wasserstein(benchmark::State& state) {
  auto mu = random_measure(std::size_t(state.range(0)), 2, 1);
  auto nu = random_measure(std::size_t(state.range(0)), 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(wvf::wasserstein_distance(mu, nu, 2.0));
}
BENCHMARK(BM_Wasserstein)->Arg(10)->Arg(30)->Arg(100);

void BM_ClassicalValue(benchmark::State& state) {
  auto spec = wvf::ProblemSpec::classical(2.0, wvf::fields::zero(), wvf::fields::quadratic(0.5));
  std::size_t N = std::size_t(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(wvf::minimize_classical({1.0}, 0.6, spec, N).value);
}
BENCHMARK(BM_ClassicalValue)->Arg(50)->Arg(200);

void BM_GeneralizedValue(benchmark::State& state) {
  auto spec = wvf::ProblemSpec::classical(2.0, wvf::fields::zero(), wvf::fields::quadratic(0.5));
  auto mu = random_measure(std::size_t(state.range(0)), 1, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(wvf::minimize_generalized(mu, 0.5, spec, 100).value);
}
BENCHMARK(BM_GeneralizedValue)->Arg(5)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
