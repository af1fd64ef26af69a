#include "selflearn/dataset.hpp"
#include "selflearn/self_learning.hpp"
#include "selflearn/split.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace selflearn;

namespace {

FeatureMatrix random_design(int rows, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::MatrixXd raw(rows, d);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < d; ++j) raw(i, j) = N(rng);
  return FeatureMatrix::with_intercept(raw);
}

void BM_FitRidge(benchmark::State& state) {
  const int rows = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  const FeatureMatrix X = random_design(rows, d, 1);
  const EncodedTargets t(Eigen::VectorXd::Random(rows));
  for (auto _ : state) benchmark::DoNotOptimize(fit_ridge(X, t, {0.1, false}));
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_FitRidge)->Args({50, 2})->Args({500, 2})->Args({500, 10})->Args({5000, 10})->Args({5000, 50});

void BM_RunBcd(benchmark::State& state) {
  const auto variant = static_cast<Variant>(state.range(0));
  const auto u = static_cast<std::size_t>(state.range(1));
  const Dataset ds = generate_two_gaussians({}, static_cast<int>(10 + u), 3);
  const ExperimentSplit split = make_split(ds, 10, u, 0, {}, false, 1);
  int iterations = 0;
  for (auto _ : state) {
    const FitResult r = run_bcd(variant, split.X_lab, split.y_lab, split.X_unl, {}, {});
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.weights);
  }
  state.counters["bcd_iterations"] = iterations;
}
BENCHMARK(BM_RunBcd)
    ->ArgNames({"hard", "U"})
    ->Args({0, 32})
    ->Args({0, 512})
    ->Args({1, 32})
    ->Args({1, 512});

}  // namespace

BENCHMARK_MAIN();
