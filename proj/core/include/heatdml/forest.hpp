#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace heatdml {

struct ForestOptions {
  int n_trees = 500;
  int mtry = 0;       // candidate features per split; 0 means max(1, p/3)
  int min_node = 5;   // minimum rows in any leaf
  bool bootstrap = true;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  double value = 0.0;  // leaf mean
  int left = -1;
  int right = -1;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

// Bagged regression trees with variance-reduction splits. Per-tree RNG
// streams are derived from `seed`, so the fit is identical for any thread
// count and any tree build order.
struct ForestModel {
  std::vector<Tree> trees;
  int B = 0;
  int mtry = 0;
  int min_node = 0;
  std::uint64_t seed = 0;
  Eigen::Index n_features = 0;
};

ForestModel fit_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& d,
                       int B, int mtry, int min_node, std::uint64_t seed);
ForestModel fit_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& d,
                       const ForestOptions& options, std::uint64_t seed,
                       int jobs = 1);

// Mean over tree outputs; values always lie within the training target range.
Eigen::VectorXd predict_forest(const ForestModel& model,
                               const Eigen::MatrixXd& X);

}  // namespace heatdml
