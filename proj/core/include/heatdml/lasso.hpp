#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace heatdml {

struct LassoOptions {
  int n_lambda = 100;              // grid points, log-spaced
  double lambda_min_ratio = 1e-3;  // smallest grid point / lambda_max
  int cv_folds = 10;
  double tol = 1e-7;     // convergence: max coefficient change per sweep
  int max_sweeps = 10000;
};

// Linear model fit by cyclic coordinate descent to
//   (1/(2n))·||y - b0 - X·beta||^2 + lambda·sum_j |beta_j|
// with columns standardized internally (mean 0, variance 1 with the 1/n
// convention). `coefficients` live on the standardized scale; predictions are
// intercept + ((x - center)/scale)·coefficients.
struct LassoModel {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  double lambda = 0.0;
  Eigen::VectorXd center;
  Eigen::VectorXd scale;
  std::vector<double> lambda_grid;  // descending, as fitted
  std::vector<double> cv_mse;       // per grid point; empty when CV skipped
};

double soft_threshold(double z, double gamma);

// Largest penalty with an all-zero solution: max_j |<x_j, y - mean(y)>| / n
// on standardized columns.
double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

std::vector<double> lasso_lambda_grid(const Eigen::MatrixXd& X,
                                      const Eigen::VectorXd& y, int n_lambda,
                                      double lambda_min_ratio);

// Fits the whole (descending) grid with warm starts and picks the lambda with
// the smallest cross-validated MSE (ties go to the stronger penalty). CV is
// skipped when the grid has a single point. A zero-variance y yields an
// intercept-only model.
LassoModel fit_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const std::vector<double>& lambda_grid, int cv_folds,
                     std::uint64_t seed);
LassoModel fit_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const LassoOptions& options, std::uint64_t seed);

Eigen::VectorXd predict_lasso(const LassoModel& model,
                              const Eigen::MatrixXd& X);

namespace detail {

// Coordinate descent on precomputed moments G = X~'X~/n, q = X~'yc/n where X~
// is standardized and yc centered. beta is the warm start and the result.
// Returns sweeps used. When sweep_objectives is non-null the objective
//   0.5·y_sqnorm_over_n - q·beta + 0.5·beta'G·beta + lambda·||beta||_1
// is appended after every sweep (it never increases).
int coordinate_descent(const Eigen::MatrixXd& G, const Eigen::VectorXd& q,
                       double y_sqnorm_over_n, double lambda,
                       Eigen::VectorXd& beta, double tol, int max_sweeps,
                       std::vector<double>* sweep_objectives = nullptr);

}  // namespace detail

}  // namespace heatdml
