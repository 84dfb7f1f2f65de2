#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "genreforge/preprocess.hpp"

namespace genreforge {

// Either a leaf (class_counts non-empty) or an internal split.
struct DecisionTreeNode {
  std::vector<std::int64_t> class_counts;  // leaves only
  int feature_index = -1;
  double threshold = 0.0;
  std::unique_ptr<DecisionTreeNode> left;   // x[feature] < threshold
  std::unique_ptr<DecisionTreeNode> right;  // x[feature] >= threshold

  bool is_leaf() const { return !left; }
};

struct ForestConfig {
  std::size_t n_estimators = 1000;
  std::size_t max_depth = 10;
  std::uint64_t seed = 42;
};

struct ForestModel {
  ForestConfig config;
  std::vector<std::unique_ptr<DecisionTreeNode>> trees;
  std::size_t n_classes = 0;
  std::size_t n_features = 0;
};

struct ForestPrediction {
  int class_index = 0;
  std::vector<std::int64_t> votes;  // per class, sums to n_estimators
};

// 1 - sum (n_c/n)^2. Throws errc::empty_node when all counts are zero.
double gini_impurity(std::span<const std::int64_t> class_counts);

// Greedy CART-style growth: at each node, `feature_subsample` candidate
// features drawn without replacement, candidate thresholds at midpoints
// between consecutive distinct values, split minimizing weighted child Gini.
// Stops on max_depth, purity, or no impurity reduction.
std::unique_ptr<DecisionTreeNode> tree_fit(const Matrix& features,
                                           std::span<const int> labels,
                                           std::span<const std::size_t> rows,
                                           std::size_t n_classes,
                                           std::size_t max_depth,
                                           std::size_t feature_subsample,
                                           std::mt19937& rng);

// Each tree trains on its own bootstrap sample with rng seeded seed + tree
// index, feature_subsample = floor(sqrt(n_features)). Deterministic given
// the seed; trees are fit in parallel.
ForestModel forest_fit(const Dataset& train, const ForestConfig& config);

// Majority vote over tree leaf predictions; all ties resolve to the lower
// class index. Throws errc::dimension_mismatch.
ForestPrediction forest_predict(const ForestModel& model,
                                std::span<const double> query);

std::size_t tree_depth(const DecisionTreeNode& node);

}  // namespace genreforge
