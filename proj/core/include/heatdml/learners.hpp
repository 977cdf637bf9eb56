#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "heatdml/forest.hpp"
#include "heatdml/lasso.hpp"

namespace heatdml {

// Common fit/predict contract so nuisance learners can be swapped (or mocked
// in tests) without touching the cross-fitting engine.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   std::uint64_t seed) = 0;
  virtual Eigen::VectorXd predict(const Eigen::MatrixXd& X) const = 0;
};

class LassoLearner final : public Learner {
 public:
  explicit LassoLearner(LassoOptions options = {});
  void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
           std::uint64_t seed) override;
  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override;
  const LassoModel& model() const;

 private:
  LassoOptions options_;
  std::optional<LassoModel> model_;
};

class ForestLearner final : public Learner {
 public:
  explicit ForestLearner(ForestOptions options = {});
  void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
           std::uint64_t seed) override;
  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override;
  const ForestModel& model() const;

 private:
  ForestOptions options_;
  std::optional<ForestModel> model_;
};

struct NuisanceConfig {
  LassoOptions lasso;    // outcome model g
  ForestOptions forest;  // treatment model m
};

using LearnerFactory = std::function<std::unique_ptr<Learner>()>;

struct NuisanceLearners {
  LearnerFactory outcome;    // learns E[Y | X]
  LearnerFactory treatment;  // learns E[D | X]

  // Lasso outcome, random-forest treatment.
  static NuisanceLearners defaults(const NuisanceConfig& config = {});
};

}  // namespace heatdml
