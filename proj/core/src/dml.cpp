#include "heatdml/dml.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "heatdml/errors.hpp"
#include "heatdml/parallel.hpp"
#include "heatdml/random.hpp"

namespace heatdml {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

DmlEstimate run_dml_once(const FeatureMatrix& fm, const CityConfig& config,
                         const NuisanceLearners& learners, std::uint64_t seed,
                         int jobs) {
  const auto n = static_cast<std::size_t>(fm.Y.size());
  const FoldAssignment folds = make_folds(n, config.k_folds, seed);
  const ResidualSet res = cross_fit_residuals(fm, folds, learners, jobs);
  const double theta = estimate_theta(res);
  const double se = standard_error(res, theta);
  DmlEstimate est;
  est.theta = theta;
  est.se = se;
  est.z = theta / se;
  est.p_value = p_value(theta, se);
  est.pct_change = to_percent(theta);
  est.n = n;
  est.K = config.k_folds;
  est.p = config.percentile_p;
  est.d = config.duration_d;
  est.seed = seed;
  return est;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

FoldAssignment make_folds(std::size_t n, int K, std::uint64_t seed) {
  if (K < 2) throw ArgumentError("K must be >= 2");
  if (static_cast<std::size_t>(K) > n) {
    throw ArgumentError("K exceeds the number of rows");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto rng = make_rng(seed);
  shuffle_inplace(order, rng);
  FoldAssignment folds;
  folds.K = K;
  folds.seed = seed;
  folds.fold_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    folds.fold_of[order[i]] = static_cast<int>(i % static_cast<std::size_t>(K));
  }
  return folds;
}

ResidualSet cross_fit_residuals(const FeatureMatrix& fm,
                                const FoldAssignment& folds,
                                const NuisanceLearners& learners, int jobs) {
  const auto n = static_cast<std::size_t>(fm.Y.size());
  if (folds.fold_of.size() != n) {
    throw ArgumentError("fold assignment does not cover the rows");
  }
  if (fm.X.rows() != fm.Y.size() || fm.D.size() != fm.Y.size()) {
    throw ArgumentError("feature matrix is misaligned");
  }
  if (!learners.outcome || !learners.treatment) {
    throw ArgumentError("both nuisance learners must be provided");
  }

  ResidualSet res;
  res.y_tilde.resize(fm.Y.size());
  res.d_tilde.resize(fm.D.size());

  parallel_for(static_cast<std::size_t>(folds.K), jobs, [&](std::size_t k) {
    std::vector<Eigen::Index> train, held;
    train.reserve(n);
    held.reserve(n / static_cast<std::size_t>(folds.K) + 1);
    for (std::size_t i = 0; i < n; ++i) {
      auto idx = static_cast<Eigen::Index>(i);
      (folds.fold_of[i] == static_cast<int>(k) ? held : train).push_back(idx);
    }
    if (held.empty()) return;
    if (train.empty()) {
      throw ArgumentError("fold complement is empty; lower K");
    }

    Eigen::MatrixXd Xtr(static_cast<Eigen::Index>(train.size()), fm.X.cols());
    Eigen::VectorXd Ytr(static_cast<Eigen::Index>(train.size()));
    Eigen::VectorXd Dtr(static_cast<Eigen::Index>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      Xtr.row(r) = fm.X.row(train[i]);
      Ytr(r) = fm.Y(train[i]);
      Dtr(r) = fm.D(train[i]);
    }
    Eigen::MatrixXd Xhe(static_cast<Eigen::Index>(held.size()), fm.X.cols());
    for (std::size_t i = 0; i < held.size(); ++i) {
      Xhe.row(static_cast<Eigen::Index>(i)) = fm.X.row(held[i]);
    }

    auto g = learners.outcome();
    g->fit(Xtr, Ytr, derive_seed(folds.seed, 2 * k + 1));
    const Eigen::VectorXd g_hat = g->predict(Xhe);
    auto m = learners.treatment();
    m->fit(Xtr, Dtr, derive_seed(folds.seed, 2 * k + 2));
    const Eigen::VectorXd m_hat = m->predict(Xhe);

    for (std::size_t i = 0; i < held.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      res.y_tilde(held[i]) = fm.Y(held[i]) - g_hat(r);
      res.d_tilde(held[i]) = fm.D(held[i]) - m_hat(r);
    }
  });
  return res;
}

double estimate_theta(const ResidualSet& res) {
  if (res.y_tilde.size() != res.d_tilde.size() || res.d_tilde.size() == 0) {
    throw ArgumentError("residual vectors are misaligned");
  }
  const double denom = res.d_tilde.squaredNorm();
  if (denom == 0.0) {
    throw DegeneracyError("treatment fully explained by covariates");
  }
  return res.d_tilde.dot(res.y_tilde) / denom;
}

double standard_error(const ResidualSet& res, double theta) {
  const auto n = res.d_tilde.size();
  if (n < 2) throw ArgumentError("need at least 2 rows for a standard error");
  const double denom = res.d_tilde.squaredNorm();
  if (denom == 0.0) {
    throw DegeneracyError("treatment fully explained by covariates");
  }
  const Eigen::ArrayXd psi =
      res.d_tilde.array() * (res.y_tilde.array() - theta * res.d_tilde.array());
  return std::sqrt(psi.square().sum()) / denom;
}

double to_percent(double theta) {
  if (!std::isfinite(theta)) throw ArgumentError("theta must be finite");
  return (std::exp(theta) - 1.0) * 100.0;
}

double p_value(double theta, double se) {
  if (!(se > 0.0)) throw ArgumentError("standard error must be positive");
  return 2.0 * (1.0 - normal_cdf(std::abs(theta) / se));
}

DmlEstimate run_dml(const FeatureMatrix& fm, const CityConfig& config,
                    int jobs) {
  return run_dml(fm, config, NuisanceLearners::defaults(config.nuisance), jobs);
}

DmlEstimate run_dml(const FeatureMatrix& fm, const CityConfig& config,
                    const NuisanceLearners& learners, int jobs) {
  if (config.repetitions < 1) {
    throw ArgumentError("repetitions must be >= 1");
  }
  if (config.repetitions == 1) {
    return run_dml_once(fm, config, learners, config.seed, jobs);
  }
  std::vector<double> thetas, ses;
  DmlEstimate est;
  for (int r = 0; r < config.repetitions; ++r) {
    est = run_dml_once(fm, config, learners,
                       derive_seed(config.seed, static_cast<std::uint64_t>(r)),
                       jobs);
    thetas.push_back(est.theta);
    ses.push_back(est.se);
  }
  est.theta = median(std::move(thetas));
  est.se = median(std::move(ses));
  est.z = est.theta / est.se;
  est.p_value = p_value(est.theta, est.se);
  est.pct_change = to_percent(est.theta);
  est.seed = config.seed;
  return est;
}

}  // namespace heatdml
