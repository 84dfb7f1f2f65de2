#include "genreforge/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "genreforge/errors.hpp"

namespace genreforge {

namespace {

double distance_between(std::span<const double> a, std::span<const double> b,
                        Distance metric) {
  double acc = 0.0;
  if (metric == Distance::Euclidean) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      acc += d * d;
    }
    return std::sqrt(acc);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += std::abs(a[i] - b[i]);
  }
  return acc;
}

}  // namespace

KnnModel knn_fit(const Dataset& train, const KnnConfig& config) {
  if (train.n_samples() == 0) {
    throw Error(errc::empty_input, "KNN needs at least one training row");
  }
  if (config.k < 1 || config.k > train.n_samples()) {
    throw Error(errc::k_too_large,
                "k=" + std::to_string(config.k) + " with " +
                    std::to_string(train.n_samples()) + " rows");
  }
  KnnModel model;
  model.config = config;
  model.train_features = train.features;
  model.train_labels = train.labels;
  model.n_classes = train.label_names.size();
  if (model.n_classes == 0) {
    model.n_classes = static_cast<std::size_t>(
        *std::max_element(train.labels.begin(), train.labels.end()) + 1);
  }
  return model;
}

KnnPrediction knn_predict(const KnnModel& model,
                          std::span<const double> query) {
  if (query.size() != model.train_features.cols()) {
    throw Error(errc::dimension_mismatch,
                "query width " + std::to_string(query.size()) +
                    " != model width " +
                    std::to_string(model.train_features.cols()));
  }

  const std::size_t n = model.train_features.rows();
  std::vector<std::pair<double, std::size_t>> ranked(n);
  for (std::size_t r = 0; r < n; ++r) {
    ranked[r] = {distance_between(query, model.train_features.row(r),
                                  model.config.distance),
                 r};
  }
  // Ties on the k-th distance admit the lower row index.
  const std::size_t k = model.config.k;
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<long>(k),
                    ranked.end());

  KnnPrediction pred;
  pred.votes.assign(model.n_classes, 0);
  pred.neighbor_distances.reserve(k);
  std::vector<double> class_distance(model.n_classes, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const auto [dist, row] = ranked[i];
    const auto cls = static_cast<std::size_t>(model.train_labels[row]);
    pred.neighbor_distances.push_back(dist);
    pred.votes[cls] += 1;
    class_distance[cls] += dist;
  }

  // Majority vote; ties break by smaller summed distance, then lower index.
  int best = 0;
  for (std::size_t c = 1; c < model.n_classes; ++c) {
    const auto bc = static_cast<std::size_t>(best);
    if (pred.votes[c] > pred.votes[bc] ||
        (pred.votes[c] == pred.votes[bc] && pred.votes[c] > 0 &&
         class_distance[c] < class_distance[bc])) {
      best = static_cast<int>(c);
    }
  }
  pred.class_index = best;
  return pred;
}

}  // namespace genreforge
