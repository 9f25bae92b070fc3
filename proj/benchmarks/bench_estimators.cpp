#include <pcapp/dense_linalg.hpp>
#include <pcapp/estimators.hpp>
#include <pcapp/factor_model.hpp>
#include <pcapp/subspace_metrics.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace pcapp;

PairedDataset one_spike_data(int n, int d) {
  FactorModelSpec spec;
  spec.d = d;
  spec.signal_variances = {10.0};
  spec.background_variances = {500.0};
  return sample_pairs(build_loadings(spec), n, 1.0, FactorDistribution::gaussian, 17);
}

void BM_GeneralizedEig(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  const auto s = static_cast<Eigen::Index>(state.range(1));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Matrix a(d, d), b(d, 2 * d);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = g(rng);
  const SymmetricMatrix s_plus(a + a.transpose());
  const SymmetricMatrix cov(b * b.transpose() / static_cast<double>(2 * d));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generalized_eig(s_plus, cov, s, 1e-10));
  }
}
BENCHMARK(BM_GeneralizedEig)->Args({100, 100})->Args({400, 400})->Args({400, 10})->Unit(benchmark::kMillisecond);

void BM_PcaPlusPlusRoute(benchmark::State& state) {
  const int n = 500;
  const int d = static_cast<int>(state.range(0));
  const auto route = static_cast<Route>(state.range(1));
  const PairedDataset ds = one_spike_data(n, d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pca_plus_plus(ds.X, ds.X_plus, 1, 2, 1e-10, route));
  }
}
BENCHMARK(BM_PcaPlusPlusRoute)
    ->ArgsProduct({{250, 900}, {static_cast<int>(Route::dense), static_cast<int>(Route::factored)}})
    ->Unit(benchmark::kMillisecond);

void BM_PcaPlus(benchmark::State& state) {
  const PairedDataset ds = one_spike_data(500, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pca_plus(ds.X, ds.X_plus, 1));
}
BENCHMARK(BM_PcaPlus)->Arg(250)->Arg(900)->Unit(benchmark::kMillisecond);

void BM_CcaTopK(benchmark::State& state) {
  const PairedDataset ds = one_spike_data(1000, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cca_top_k(ds.X, ds.X_plus, 1));
}
BENCHMARK(BM_CcaTopK)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SinThetaDist(benchmark::State& state) {
  const PairedDataset ds = one_spike_data(200, static_cast<int>(state.range(0)));
  const Matrix est = pca(ds.X, 1).basis;
  for (auto _ : state) benchmark::DoNotOptimize(sin_theta_dist(est, ds.truth));
}
BENCHMARK(BM_SinThetaDist)->Arg(1000);

}  // namespace

// The packaged benchmark_main archive carries LTO bytecode from another
// compiler release, so the entry point is defined here.
BENCHMARK_MAIN();
