#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "heatdml/lasso.hpp"
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
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (int j = 0; j < p; j += 4) beta(j) = 0.5;
  prob.y = prob.X * beta;
  for (int i = 0; i < n; ++i) prob.y(i) += heatdml::normal(rng);
  return prob;
}

void BM_lasso_cv_path(benchmark::State& state) {
  const auto prob = make_problem(static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(1)), 42);
  heatdml::LassoOptions options;
  options.n_lambda = 50;
  options.cv_folds = 5;
  for (auto _ : state) {
    auto model = heatdml::fit_lasso(prob.X, prob.y, options, 7);
    benchmark::DoNotOptimize(model);
  }
}

void BM_lasso_single_lambda(benchmark::State& state) {
  const auto prob = make_problem(static_cast<int>(state.range(0)), 30, 42);
  const std::vector<double> grid = {0.05};
  for (auto _ : state) {
    auto model = heatdml::fit_lasso(prob.X, prob.y, grid, 5, 7);
    benchmark::DoNotOptimize(model);
  }
}

void BM_lasso_predict(benchmark::State& state) {
  const auto prob = make_problem(static_cast<int>(state.range(0)), 30, 42);
  heatdml::LassoOptions options;
  options.n_lambda = 20;
  options.cv_folds = 4;
  const auto model = heatdml::fit_lasso(prob.X, prob.y, options, 7);
  for (auto _ : state) {
    auto pred = heatdml::predict_lasso(model, prob.X);
    benchmark::DoNotOptimize(pred);
  }
}

BENCHMARK(BM_lasso_cv_path)->Args({500, 20})->Args({2000, 40});
BENCHMARK(BM_lasso_single_lambda)->Arg(500)->Arg(2000);
BENCHMARK(BM_lasso_predict)->Arg(2000);

}  // namespace
