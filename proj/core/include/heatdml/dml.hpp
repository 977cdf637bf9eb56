#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "heatdml/features.hpp"
#include "heatdml/learners.hpp"
#include "heatdml/types.hpp"

namespace heatdml {

// Balanced random partition of rows into K folds; sizes differ by at most 1.
struct FoldAssignment {
  std::vector<int> fold_of;  // per-row fold index in 0..K-1
  int K = 0;
  std::uint64_t seed = 0;
};

FoldAssignment make_folds(std::size_t n, int K, std::uint64_t seed);

// Out-of-fold residuals: row residuals always come from models fitted on the
// complement of the row's fold.
struct ResidualSet {
  Eigen::VectorXd y_tilde;
  Eigen::VectorXd d_tilde;
};

ResidualSet cross_fit_residuals(const FeatureMatrix& fm,
                                const FoldAssignment& folds,
                                const NuisanceLearners& learners,
                                int jobs = 1);

// theta = sum(d~·y~) / sum(d~²): the no-intercept slope of y~ on d~.
double estimate_theta(const ResidualSet& res);

// Heteroskedasticity-robust influence-function standard error:
// sqrt(sum((d~·(y~ - theta·d~))²)) / sum(d~²).
double standard_error(const ResidualSet& res, double theta);

double to_percent(double theta);                // (exp(theta) - 1)·100
double p_value(double theta, double se);        // two-sided normal

struct DmlEstimate {
  double theta = 0.0;
  double se = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  double pct_change = 0.0;
  std::size_t n = 0;
  int K = 0;
  double p = 0.0;  // percentile defining the treatment
  int d = 0;       // duration defining the treatment
  std::uint64_t seed = 0;
};

// make_folds -> cross_fit_residuals -> estimate_theta -> standard_error,
// with percent change and p-value attached. When config.repetitions > 1 the
// whole procedure runs on derived seeds and the component-wise median of
// (theta, se) is reported, as a sample-splitting sensitivity option.
DmlEstimate run_dml(const FeatureMatrix& fm, const CityConfig& config,
                    int jobs = 1);
DmlEstimate run_dml(const FeatureMatrix& fm, const CityConfig& config,
                    const NuisanceLearners& learners, int jobs = 1);

}  // namespace heatdml
