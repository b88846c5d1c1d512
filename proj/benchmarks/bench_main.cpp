#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mrtest/harness.hpp"

namespace {

using namespace mrtest;

ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  ComplexMatrix a(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  return (a + a.adjoint()) * Complex(0.5);
}

QuantumModel precession(std::size_t n_times, double tau) {
  const ComplexMatrix sx{{0.0, 1.0}, {1.0, 0.0}};
  const ComplexMatrix sz{{1.0, 0.0}, {0.0, -1.0}};
  std::vector<double> times(n_times);
  for (std::size_t k = 0; k < n_times; ++k) times[k] = tau * static_cast<double>(k);
  return QuantumModel::create(sx * Complex(0.5), ComplexMatrix::identity(2) * Complex(0.5), sz, times);
}

void BM_EigHermitian(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto a = random_hermitian(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eig_hermitian(a));
}
BENCHMARK(BM_EigHermitian)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_DInterval(benchmark::State& state) {
  const auto m = MomentSet::three({0.1, -0.2, 0.3}, 0.4, 0.1, -0.2);
  for (auto _ : state) benchmark::DoNotOptimize(d_interval(m));
}
BENCHMARK(BM_DInterval);

void BM_LpFeasibility(benchmark::State& state) {
  const double h = std::sqrt(0.5);
  const auto m = state.range(0) == 3 ? MomentSet::three({0.1, -0.2, 0.3}, 0.4, 0.1, -0.2)
                                     : MomentSet::four({0, 0, 0, 0}, h, h, h, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(lp_feasibility(m));
}
BENCHMARK(BM_LpFeasibility)->Arg(3)->Arg(4);

void BM_SweepPoint(benchmark::State& state) {
  const auto model = precession(static_cast<std::size_t>(state.range(0)), std::numbers::pi / 3);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(model, 0.0));
}
BENCHMARK(BM_SweepPoint)->Arg(3)->Arg(4);

void BM_CampaignSample(benchmark::State& state) {
  CampaignOptions o;
  o.count = 10;
  o.dim_min = 2;
  o.dim_max = 4;
  for (auto _ : state) benchmark::DoNotOptimize(random_campaign(o));
}
BENCHMARK(BM_CampaignSample)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
