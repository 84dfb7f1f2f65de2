#include "genreforge/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "detail/rng.hpp"
#include "genreforge/errors.hpp"

namespace genreforge {

namespace {

std::vector<std::int64_t> count_classes(std::span<const int> labels,
                                        std::span<const std::size_t> rows,
                                        std::size_t n_classes) {
  std::vector<std::int64_t> counts(n_classes, 0);
  for (std::size_t r : rows) {
    counts[static_cast<std::size_t>(labels[r])] += 1;
  }
  return counts;
}

double weighted_child_gini(std::span<const std::int64_t> left,
                           std::span<const std::int64_t> right) {
  std::int64_t n_left = 0;
  std::int64_t n_right = 0;
  for (auto c : left) n_left += c;
  for (auto c : right) n_right += c;
  const double n = static_cast<double>(n_left + n_right);
  double score = 0.0;
  if (n_left > 0) {
    score += (static_cast<double>(n_left) / n) * gini_impurity(left);
  }
  if (n_right > 0) {
    score += (static_cast<double>(n_right) / n) * gini_impurity(right);
  }
  return score;
}

std::unique_ptr<DecisionTreeNode> make_leaf(std::vector<std::int64_t> counts) {
  auto leaf = std::make_unique<DecisionTreeNode>();
  leaf->class_counts = std::move(counts);
  return leaf;
}

std::unique_ptr<DecisionTreeNode> grow(const Matrix& features,
                                       std::span<const int> labels,
                                       std::vector<std::size_t>& rows,
                                       std::size_t n_classes,
                                       std::size_t depth,
                                       std::size_t max_depth,
                                       std::size_t feature_subsample,
                                       std::mt19937& rng) {
  auto counts = count_classes(labels, rows, n_classes);
  const std::int64_t node_size = static_cast<std::int64_t>(rows.size());

  const bool pure =
      *std::max_element(counts.begin(), counts.end()) == node_size;
  if (depth >= max_depth || pure) {
    return make_leaf(std::move(counts));
  }

  const double parent_gini = gini_impurity(counts);
  const auto candidates = detail::rng_sample_without_replacement(
      rng, features.cols(), feature_subsample);

  // Best split so far; "first strictly better wins" makes every tie-break
  // deterministic (candidate draw order, then ascending threshold).
  double best_score = parent_gini;
  int best_feature = -1;
  double best_threshold = 0.0;

  std::vector<std::pair<double, int>> sorted(rows.size());
  std::vector<std::int64_t> left_counts(n_classes);
  std::vector<std::int64_t> right_counts(n_classes);
  for (std::size_t feature : candidates) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      sorted[i] = {features(rows[i], feature), labels[rows[i]]};
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::fill(left_counts.begin(), left_counts.end(), 0);
    right_counts = counts;
    // Scan boundaries between consecutive distinct values; the candidate
    // threshold is their midpoint.
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      const auto cls = static_cast<std::size_t>(sorted[i].second);
      left_counts[cls] += 1;
      right_counts[cls] -= 1;
      if (sorted[i].first == sorted[i + 1].first) continue;
      const double mid = 0.5 * (sorted[i].first + sorted[i + 1].first);
      if (!(mid > sorted[i].first)) continue;  // midpoint rounded down
      const double score = weighted_child_gini(left_counts, right_counts);
      if (score < best_score) {
        best_score = score;
        best_feature = static_cast<int>(feature);
        best_threshold = mid;
      }
    }
  }

  if (best_feature < 0) {
    return make_leaf(std::move(counts));  // no split reduces impurity
  }

  std::vector<std::size_t> left_rows;
  std::vector<std::size_t> right_rows;
  for (std::size_t r : rows) {
    if (features(r, static_cast<std::size_t>(best_feature)) < best_threshold) {
      left_rows.push_back(r);
    } else {
      right_rows.push_back(r);
    }
  }

  auto node = std::make_unique<DecisionTreeNode>();
  node->feature_index = best_feature;
  node->threshold = best_threshold;
  node->left = grow(features, labels, left_rows, n_classes, depth + 1,
                    max_depth, feature_subsample, rng);
  node->right = grow(features, labels, right_rows, n_classes, depth + 1,
                     max_depth, feature_subsample, rng);
  return node;
}

int leaf_majority(const DecisionTreeNode& leaf) {
  int best = 0;
  for (std::size_t c = 1; c < leaf.class_counts.size(); ++c) {
    if (leaf.class_counts[c] > leaf.class_counts[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(c);
    }
  }
  return best;
}

const DecisionTreeNode& descend(const DecisionTreeNode& node,
                                std::span<const double> query) {
  const DecisionTreeNode* at = &node;
  while (!at->is_leaf()) {
    at = query[static_cast<std::size_t>(at->feature_index)] < at->threshold
             ? at->left.get()
             : at->right.get();
  }
  return *at;
}

}  // namespace

double gini_impurity(std::span<const std::int64_t> class_counts) {
  std::int64_t total = 0;
  for (auto c : class_counts) total += c;
  if (total <= 0) {
    throw Error(errc::empty_node, "gini of an empty node");
  }
  double sum_sq = 0.0;
  for (auto c : class_counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

std::unique_ptr<DecisionTreeNode> tree_fit(const Matrix& features,
                                           std::span<const int> labels,
                                           std::span<const std::size_t> rows,
                                           std::size_t n_classes,
                                           std::size_t max_depth,
                                           std::size_t feature_subsample,
                                           std::mt19937& rng) {
  if (rows.empty()) {
    throw Error(errc::empty_input, "cannot fit a tree on zero rows");
  }
  std::vector<std::size_t> node_rows(rows.begin(), rows.end());
  return grow(features, labels, node_rows, n_classes, 0, max_depth,
              feature_subsample, rng);
}

ForestModel forest_fit(const Dataset& train, const ForestConfig& config) {
  if (train.n_samples() == 0) {
    throw Error(errc::empty_input, "cannot fit a forest on zero rows");
  }
  const std::size_t n = train.n_samples();
  std::size_t n_classes = train.label_names.size();
  if (n_classes == 0) {
    n_classes = static_cast<std::size_t>(
        *std::max_element(train.labels.begin(), train.labels.end()) + 1);
  }
  const auto feature_subsample = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::floor(std::sqrt(static_cast<double>(train.n_features())))));

  ForestModel model;
  model.config = config;
  model.n_classes = n_classes;
  model.n_features = train.n_features();
  model.trees.resize(config.n_estimators);

  // Each tree derives its rng from seed + tree index, so trees can be fit
  // in any order (or in parallel) with identical results.
  auto fit_one = [&](std::size_t t) {
    std::mt19937 rng(
        static_cast<std::mt19937::result_type>(config.seed + t));
    std::vector<std::size_t> bootstrap(n);
    for (std::size_t i = 0; i < n; ++i) {
      bootstrap[i] = detail::rng_index(rng, n);
    }
    model.trees[t] =
        tree_fit(train.features, train.labels, bootstrap, n_classes,
                 config.max_depth, feature_subsample, rng);
  };

  const std::size_t workers = std::min<std::size_t>(
      std::max(1u, std::thread::hardware_concurrency()), config.n_estimators);
  if (workers <= 1 || config.n_estimators < 4) {
    for (std::size_t t = 0; t < config.n_estimators; ++t) fit_one(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next.fetch_add(1); t < config.n_estimators;
             t = next.fetch_add(1)) {
          fit_one(t);
        }
      });
    }
    for (auto& thread : pool) thread.join();
  }
  return model;
}

ForestPrediction forest_predict(const ForestModel& model,
                                std::span<const double> query) {
  if (query.size() != model.n_features) {
    throw Error(errc::dimension_mismatch,
                "query width != model width");
  }
  ForestPrediction pred;
  pred.votes.assign(model.n_classes, 0);
  for (const auto& tree : model.trees) {
    const auto& leaf = descend(*tree, query);
    pred.votes[static_cast<std::size_t>(leaf_majority(leaf))] += 1;
  }
  int best = 0;
  for (std::size_t c = 1; c < pred.votes.size(); ++c) {
    if (pred.votes[c] > pred.votes[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(c);
    }
  }
  pred.class_index = best;
  return pred;
}

std::size_t tree_depth(const DecisionTreeNode& node) {
  if (node.is_leaf()) return 0;
  return 1 + std::max(tree_depth(*node.left), tree_depth(*node.right));
}

}  // namespace genreforge
