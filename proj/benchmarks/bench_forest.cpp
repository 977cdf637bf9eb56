#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <cstdint>

#include "heatdml/forest.hpp"
#include "heatdml/random.hpp"

namespace {

struct Problem {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

Problem make_problem(int n, int p, std::uint64_t seed) {
  auto rng = heatdml::make_rng(seed);
  Problem prob;
  prob.X.resize(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) prob.X(i, j) = heatdml::normal(rng);
  }
  prob.y.resize(n);
  for (int i = 0; i < n; ++i) {
    prob.y(i) = prob.X(i, 0) > 0.5 ? 1.0 : 0.0;  // step surface, forest food
  }
  return prob;
}

void BM_forest_fit(benchmark::State& state) {
  const auto prob = make_problem(1000, 10, 42);
  heatdml::ForestOptions options;
  options.n_trees = static_cast<int>(state.range(0));
  options.min_node = 10;
  for (auto _ : state) {
    auto model = heatdml::fit_forest(prob.X, prob.y, options, 7);
    benchmark::DoNotOptimize(model);
  }
}

void BM_forest_predict(benchmark::State& state) {
  const auto prob = make_problem(static_cast<int>(state.range(0)), 10, 42);
  heatdml::ForestOptions options;
  options.n_trees = 100;
  options.min_node = 10;
  const auto model = heatdml::fit_forest(prob.X, prob.y, options, 7);
  for (auto _ : state) {
    auto pred = heatdml::predict_forest(model, prob.X);
    benchmark::DoNotOptimize(pred);
  }
}

BENCHMARK(BM_forest_fit)->Arg(50)->Arg(200);
BENCHMARK(BM_forest_predict)->Arg(1000)->Arg(4000);

}  // namespace
