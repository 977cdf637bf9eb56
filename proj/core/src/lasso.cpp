#include "heatdml/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "heatdml/errors.hpp"
#include "heatdml/random.hpp"

namespace heatdml {

namespace {

struct Standardization {
  Eigen::VectorXd center;
  Eigen::VectorXd scale;  // zero-variance columns get scale 1 (and stay inert)
};

Standardization column_standardization(const Eigen::MatrixXd& X) {
  const auto n = static_cast<double>(X.rows());
  Standardization s;
  s.center = X.colwise().mean();
  s.scale.resize(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double var = (X.col(j).array() - s.center(j)).square().sum() / n;
    s.scale(j) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

Eigen::MatrixXd standardize(const Eigen::MatrixXd& X,
                            const Standardization& s) {
  Eigen::MatrixXd out = X;
  out.rowwise() -= s.center.transpose();
  out.array().rowwise() /= s.scale.transpose().array();
  return out;
}

// Balanced random fold labels; same scheme as the cross-fitting engine but
// kept local so the learner layer stays self-contained.
std::vector<int> cv_fold_labels(std::size_t n, int folds, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto rng = make_rng(seed);
  shuffle_inplace(order, rng);
  std::vector<int> fold_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    fold_of[order[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
  }
  return fold_of;
}

struct PathProblem {
  Eigen::MatrixXd G;
  Eigen::VectorXd q;
  double y_sqnorm_over_n = 0.0;
  double y_mean = 0.0;
  Standardization std;
};

PathProblem make_problem(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  PathProblem pb;
  pb.std = column_standardization(X);
  const Eigen::MatrixXd Xs = standardize(X, pb.std);
  const auto n = static_cast<double>(X.rows());
  pb.y_mean = y.mean();
  const Eigen::VectorXd yc = y.array() - pb.y_mean;
  pb.G = (Xs.transpose() * Xs) / n;
  pb.q = (Xs.transpose() * yc) / n;
  pb.y_sqnorm_over_n = yc.squaredNorm() / n;
  return pb;
}

LassoModel fit_lasso_impl(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          std::vector<double> grid, int cv_folds,
                          std::uint64_t seed, double tol, int max_sweeps) {
  const auto n = X.rows();
  const auto p = X.cols();
  if (n < 1 || y.size() != n) {
    throw ArgumentError("lasso: X rows and y length must match and be >= 1");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw ValidationError("lasso: non-finite entries");
  }
  if (grid.empty()) throw ArgumentError("lasso: empty lambda grid");
  for (double l : grid) {
    if (!(l >= 0.0)) throw ArgumentError("lasso: negative lambda");
  }
  std::sort(grid.begin(), grid.end(), std::greater<>());

  LassoModel model;
  model.lambda_grid = grid;

  const double y_mean = y.mean();
  const double y_var = (y.array() - y_mean).square().sum();
  const auto full_std = column_standardization(X);
  model.center = full_std.center;
  model.scale = full_std.scale;
  model.intercept = y_mean;
  model.coefficients = Eigen::VectorXd::Zero(p);
  if (y_var == 0.0) {
    model.lambda = grid.front();
    return model;
  }

  std::size_t best = 0;
  if (grid.size() > 1) {
    if (cv_folds < 2) throw ArgumentError("lasso: cv_folds must be >= 2");
    if (static_cast<Eigen::Index>(cv_folds) > n) {
      throw ArgumentError("lasso: cv_folds exceeds sample size");
    }
    const auto fold_of =
        cv_fold_labels(static_cast<std::size_t>(n), cv_folds, seed);
    std::vector<double> sse(grid.size(), 0.0);
    for (int k = 0; k < cv_folds; ++k) {
      std::vector<Eigen::Index> tr, va;
      for (Eigen::Index i = 0; i < n; ++i) {
        (fold_of[static_cast<std::size_t>(i)] == k ? va : tr).push_back(i);
      }
      Eigen::MatrixXd Xtr(tr.size(), p);
      Eigen::VectorXd ytr(tr.size());
      for (std::size_t i = 0; i < tr.size(); ++i) {
        Xtr.row(static_cast<Eigen::Index>(i)) = X.row(tr[i]);
        ytr(static_cast<Eigen::Index>(i)) = y(tr[i]);
      }
      const PathProblem pb = make_problem(Xtr, ytr);
      Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
      const Eigen::VectorXd w0 = pb.std.scale.cwiseInverse();
      for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        detail::coordinate_descent(pb.G, pb.q, pb.y_sqnorm_over_n, grid[gi],
                                   beta, tol, max_sweeps);
        const Eigen::VectorXd w = beta.cwiseProduct(w0);
        const double shift = pb.y_mean - pb.std.center.dot(w);
        for (Eigen::Index r : va) {
          const double pred = shift + X.row(r).dot(w);
          const double err = y(r) - pred;
          sse[gi] += err * err;
        }
      }
    }
    model.cv_mse.resize(grid.size());
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      model.cv_mse[gi] = sse[gi] / static_cast<double>(n);
      if (model.cv_mse[gi] < model.cv_mse[best]) best = gi;
    }
  }

  const PathProblem pb = make_problem(X, y);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (std::size_t gi = 0; gi <= best; ++gi) {
    detail::coordinate_descent(pb.G, pb.q, pb.y_sqnorm_over_n, grid[gi], beta,
                               tol, max_sweeps);
  }
  model.coefficients = beta;
  model.lambda = grid[best];
  return model;
}

}  // namespace

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() != y.size() || X.rows() < 1) {
    throw ArgumentError("lasso: X rows and y length must match and be >= 1");
  }
  const PathProblem pb = make_problem(X, y);
  return pb.q.cwiseAbs().maxCoeff();
}

std::vector<double> lasso_lambda_grid(const Eigen::MatrixXd& X,
                                      const Eigen::VectorXd& y, int n_lambda,
                                      double lambda_min_ratio) {
  if (n_lambda < 1) throw ArgumentError("lasso: n_lambda must be >= 1");
  if (!(lambda_min_ratio > 0.0 && lambda_min_ratio <= 1.0)) {
    throw ArgumentError("lasso: lambda_min_ratio must be in (0, 1]");
  }
  const double lmax = lasso_lambda_max(X, y);
  if (lmax <= 0.0) return {0.0};
  if (n_lambda == 1) return {lmax};
  std::vector<double> grid(static_cast<std::size_t>(n_lambda));
  const double step = std::log(lambda_min_ratio) / (n_lambda - 1);
  for (int i = 0; i < n_lambda; ++i) {
    grid[static_cast<std::size_t>(i)] = lmax * std::exp(step * i);
  }
  return grid;
}

LassoModel fit_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const std::vector<double>& lambda_grid, int cv_folds,
                     std::uint64_t seed) {
  const LassoOptions defaults;
  return fit_lasso_impl(X, y, lambda_grid, cv_folds, seed, defaults.tol,
                        defaults.max_sweeps);
}

LassoModel fit_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const LassoOptions& options, std::uint64_t seed) {
  const auto grid =
      lasso_lambda_grid(X, y, options.n_lambda, options.lambda_min_ratio);
  return fit_lasso_impl(X, y, grid, options.cv_folds, seed, options.tol,
                        options.max_sweeps);
}

Eigen::VectorXd predict_lasso(const LassoModel& model,
                              const Eigen::MatrixXd& X) {
  if (X.cols() != model.coefficients.size()) {
    throw ArgumentError("lasso: column count does not match the fitted model");
  }
  const Eigen::VectorXd w =
      model.coefficients.cwiseQuotient(model.scale);
  const double shift = model.intercept - model.center.dot(w);
  return (X * w).array() + shift;
}

namespace detail {

int coordinate_descent(const Eigen::MatrixXd& G, const Eigen::VectorXd& q,
                       double y_sqnorm_over_n, double lambda,
                       Eigen::VectorXd& beta, double tol, int max_sweeps,
                       std::vector<double>* sweep_objectives) {
  const auto p = G.rows();
  Eigen::VectorXd Gb = G * beta;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double gjj = G(j, j);
      if (gjj <= 0.0) continue;
      const double z = q(j) - Gb(j) + gjj * beta(j);
      const double bj = soft_threshold(z, lambda) / gjj;
      const double delta = bj - beta(j);
      if (delta != 0.0) {
        Gb += delta * G.col(j);
        beta(j) = bj;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    if (sweep_objectives) {
      sweep_objectives->push_back(0.5 * y_sqnorm_over_n - q.dot(beta) +
                                  0.5 * beta.dot(Gb) +
                                  lambda * beta.lpNorm<1>());
    }
    if (max_delta < tol) return sweep;
  }
  return max_sweeps;
}

}  // namespace detail

}  // namespace heatdml
