#include "heatdml/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "heatdml/errors.hpp"
#include "heatdml/parallel.hpp"
#include "heatdml/random.hpp"

namespace heatdml {

namespace {

struct TreeBuilder {
  const Eigen::MatrixXd& X;
  const Eigen::VectorXd& y;
  int mtry;
  int min_node;
  std::mt19937_64 rng;
  std::vector<int> rows;  // training sample; partitioned in place
  std::vector<int> features;
  std::vector<std::pair<double, int>> sorted;  // (value, row), reused per node
  std::vector<TreeNode> nodes;

  // Builds the node over rows[lo, hi) and returns its index.
  int build(std::size_t lo, std::size_t hi) {
    const auto m = hi - lo;
    double sum = 0.0;
    double ymin = y(rows[lo]);
    double ymax = ymin;
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = y(rows[i]);
      sum += v;
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(TreeNode{.value = sum / static_cast<double>(m)});
    if (m < 2 * static_cast<std::size_t>(min_node) || ymin == ymax) return id;

    // Candidate features: partial Fisher-Yates over the feature list.
    const auto p = static_cast<std::size_t>(X.cols());
    const auto k = static_cast<std::size_t>(mtry);
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + uniform_index(rng, p - i);
      std::swap(features[i], features[j]);
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = -1.0;
    for (std::size_t c = 0; c < k; ++c) {
      const int f = features[c];
      sorted.clear();
      for (std::size_t i = lo; i < hi; ++i) {
        sorted.emplace_back(X(rows[i], f), rows[i]);
      }
      std::sort(sorted.begin(), sorted.end());
      double left_sum = 0.0;
      for (std::size_t i = 0; i + 1 < m; ++i) {
        left_sum += y(sorted[i].second);
        const double a = sorted[i].first;
        const double b = sorted[i + 1].first;
        if (a == b) continue;
        const auto nl = i + 1;
        const auto nr = m - nl;
        if (nl < static_cast<std::size_t>(min_node) ||
            nr < static_cast<std::size_t>(min_node)) {
          continue;
        }
        const double right_sum = sum - left_sum;
        const double score = left_sum * left_sum / static_cast<double>(nl) +
                             right_sum * right_sum / static_cast<double>(nr);
        if (score > best_score) {
          best_score = score;
          best_feature = f;
          double thr = 0.5 * (a + b);
          if (thr >= b) thr = a;  // midpoint rounded up; keep training split
          best_threshold = thr;
        }
      }
    }
    if (best_feature < 0) return id;

    // Stable partition via the sort order of the chosen feature, so the
    // layout (and every downstream float sum) is fully pinned.
    sorted.clear();
    for (std::size_t i = lo; i < hi; ++i) {
      sorted.emplace_back(X(rows[i], best_feature), rows[i]);
    }
    std::sort(sorted.begin(), sorted.end());
    std::size_t mid = lo;
    for (const auto& [v, r] : sorted) {
      if (v <= best_threshold) rows[mid++] = r;
    }
    std::size_t tail = mid;
    for (const auto& [v, r] : sorted) {
      if (v > best_threshold) rows[tail++] = r;
    }

    nodes[static_cast<std::size_t>(id)].feature = best_feature;
    nodes[static_cast<std::size_t>(id)].threshold = best_threshold;
    const int left = build(lo, mid);
    nodes[static_cast<std::size_t>(id)].left = left;
    const int right = build(mid, hi);
    nodes[static_cast<std::size_t>(id)].right = right;
    return id;
  }
};

Tree build_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int mtry,
                int min_node, bool bootstrap, std::uint64_t tree_seed) {
  const auto n = static_cast<std::size_t>(X.rows());
  TreeBuilder builder{
      .X = X, .y = y, .mtry = mtry, .min_node = min_node,
      .rng = make_rng(tree_seed)};
  builder.rows.resize(n);
  if (bootstrap) {
    for (std::size_t i = 0; i < n; ++i) {
      builder.rows[i] = static_cast<int>(uniform_index(builder.rng, n));
    }
  } else {
    std::iota(builder.rows.begin(), builder.rows.end(), 0);
  }
  builder.features.resize(static_cast<std::size_t>(X.cols()));
  std::iota(builder.features.begin(), builder.features.end(), 0);
  builder.sorted.reserve(n);
  builder.nodes.reserve(2 * n / static_cast<std::size_t>(min_node) + 1);
  builder.build(0, n);
  return Tree{std::move(builder.nodes)};
}

double tree_value(const Tree& tree, const Eigen::MatrixXd& X, Eigen::Index r) {
  int node = 0;
  for (;;) {
    const TreeNode& nd = tree.nodes[static_cast<std::size_t>(node)];
    if (nd.feature < 0) return nd.value;
    node = X(r, nd.feature) <= nd.threshold ? nd.left : nd.right;
  }
}

}  // namespace

ForestModel fit_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& d,
                       int B, int mtry, int min_node, std::uint64_t seed) {
  ForestOptions options;
  options.n_trees = B;
  options.mtry = mtry;
  options.min_node = min_node;
  return fit_forest(X, d, options, seed);
}

ForestModel fit_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& d,
                       const ForestOptions& options, std::uint64_t seed,
                       int jobs) {
  const auto n = X.rows();
  const auto p = X.cols();
  if (n < 1 || d.size() != n) {
    throw ArgumentError("forest: X rows and d length must match and be >= 1");
  }
  if (!X.allFinite() || !d.allFinite()) {
    throw ValidationError("forest: non-finite entries");
  }
  if (options.n_trees < 1) throw ArgumentError("forest: need at least 1 tree");
  if (options.min_node < 1) throw ArgumentError("forest: min_node must be >= 1");
  int mtry = options.mtry;
  if (mtry == 0) mtry = std::max(1, static_cast<int>(p / 3));
  if (mtry < 1 || mtry > p) {
    throw ArgumentError("forest: mtry must be in [1, columns]");
  }

  ForestModel model;
  model.B = options.n_trees;
  model.mtry = mtry;
  model.min_node = options.min_node;
  model.seed = seed;
  model.n_features = p;
  model.trees.resize(static_cast<std::size_t>(options.n_trees));
  parallel_for(model.trees.size(), jobs, [&](std::size_t b) {
    model.trees[b] = build_tree(X, d, mtry, options.min_node,
                                options.bootstrap, derive_seed(seed, b));
  });
  return model;
}

Eigen::VectorXd predict_forest(const ForestModel& model,
                               const Eigen::MatrixXd& X) {
  if (X.cols() != model.n_features) {
    throw ArgumentError("forest: column count does not match the fitted model");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(X.rows());
  for (const Tree& tree : model.trees) {
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
      out(r) += tree_value(tree, X, r);
    }
  }
  return out / static_cast<double>(model.trees.size());
}

}  // namespace heatdml
