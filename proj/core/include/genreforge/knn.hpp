#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "genreforge/preprocess.hpp"

namespace genreforge {

enum class Distance { Euclidean, Manhattan };

struct KnnConfig {
  std::size_t k = 5;
  Distance distance = Distance::Euclidean;
};

// Lazy learner: stores the training rows verbatim.
struct KnnModel {
  KnnConfig config;
  Matrix train_features;
  std::vector<int> train_labels;
  std::size_t n_classes = 0;
};

struct KnnPrediction {
  int class_index = 0;
  std::vector<double> neighbor_distances;  // the k nearest, ascending
  std::vector<int> votes;                  // per class, sums to k
};

// Throws errc::k_too_large if k exceeds the number of rows.
KnnModel knn_fit(const Dataset& train, const KnnConfig& config);

// Exact k nearest by the configured metric, majority vote. Vote ties break
// by smaller summed distance among tied classes, then lower class index;
// ties on the k-th distance admit the lower row index.
// Throws errc::dimension_mismatch.
KnnPrediction knn_predict(const KnnModel& model, std::span<const double> query);

}  // namespace genreforge
