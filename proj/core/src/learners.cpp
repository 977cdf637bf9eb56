#include "heatdml/learners.hpp"

#include "heatdml/errors.hpp"

namespace heatdml {

LassoLearner::LassoLearner(LassoOptions options) : options_(options) {}

void LassoLearner::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       std::uint64_t seed) {
  model_ = fit_lasso(X, y, options_, seed);
}

Eigen::VectorXd LassoLearner::predict(const Eigen::MatrixXd& X) const {
  if (!model_) throw ArgumentError("lasso learner: predict before fit");
  return predict_lasso(*model_, X);
}

const LassoModel& LassoLearner::model() const {
  if (!model_) throw ArgumentError("lasso learner: not fitted");
  return *model_;
}

ForestLearner::ForestLearner(ForestOptions options) : options_(options) {}

void ForestLearner::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        std::uint64_t seed) {
  model_ = fit_forest(X, y, options_, seed);
}

Eigen::VectorXd ForestLearner::predict(const Eigen::MatrixXd& X) const {
  if (!model_) throw ArgumentError("forest learner: predict before fit");
  return predict_forest(*model_, X);
}

const ForestModel& ForestLearner::model() const {
  if (!model_) throw ArgumentError("forest learner: not fitted");
  return *model_;
}

NuisanceLearners NuisanceLearners::defaults(const NuisanceConfig& config) {
  return NuisanceLearners{
      .outcome = [opts = config.lasso] { return std::make_unique<LassoLearner>(opts); },
      .treatment =
          [opts = config.forest] { return std::make_unique<ForestLearner>(opts); },
  };
}

}  // namespace heatdml
