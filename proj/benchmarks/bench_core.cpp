#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "bellman_lab/bellman_forms.hpp"
#include "bellman_lab/search.hpp"
#include "bellman_lab/tree_maximal.hpp"
#include "bellman_lab/weak_norms.hpp"

using namespace bellman_lab;

namespace {

StepFunction random_function(int depth) {
  const auto tree = TreePartition::build(2, depth);
  std::mt19937_64 rng(1);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(tree.leaf_count());
  for (double& x : v) x = e(rng);
  return StepFunction(tree, std::move(v));
}

void BM_maximal_values(benchmark::State& state) {
  const StepFunction phi = random_function(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(maximal_values(phi.partition(), phi.values()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(phi.size()));
}
BENCHMARK(BM_maximal_values)->DenseRange(10, 18, 4);

void BM_quasi_norm(benchmark::State& state) {
  const StepFunction phi = random_function(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(quasi_norm(phi, 2.0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(phi.size()));
}
BENCHMARK(BM_quasi_norm)->DenseRange(10, 18, 4);

void BM_equiv_norm(benchmark::State& state) {
  const StepFunction phi = random_function(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(equiv_norm(phi, 2.0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(phi.size()));
}
BENCHMARK(BM_equiv_norm)->DenseRange(10, 18, 4);

void BM_sample_feasible(benchmark::State& state) {
  SearchConfig c;
  c.query = {2.0, 0.5, 1.0, 1.5, static_cast<Functional>(state.range(0))};
  c.depth = 10;
  std::uint64_t trial = 0;
  for (auto _ : state) {
    auto rng = trial_rng(3, trial++);
    benchmark::DoNotOptimize(sample_feasible(c, rng));
  }
}
BENCHMARK(BM_sample_feasible)->DenseRange(0, 2);

void BM_extremal_B(benchmark::State& state) {
  const auto tree = TreePartition::build(2, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(extremal_B({2.0, 0.5, 1.0, 4.0, Functional::B}, tree));
  }
}
BENCHMARK(BM_extremal_B)->DenseRange(10, 16, 3);

}  // namespace

BENCHMARK_MAIN();
