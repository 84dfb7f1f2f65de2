#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "genreforge/matrix.hpp"

namespace genreforge {

// Feature matrix with integer-encoded labels. labels[i] indexes label_names.
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> label_names;
  std::vector<std::string> feature_names;

  std::size_t n_samples() const { return features.rows(); }
  std::size_t n_features() const { return features.cols(); }
};

enum class ScalerKind { Standard, MinMax };

// Per-feature statistics fitted on training rows only. For Standard the
// vectors hold mean/std (population), for MinMax they hold min/max.
struct ScalerParams {
  ScalerKind kind = ScalerKind::Standard;
  std::vector<double> mean_or_min;
  std::vector<double> std_or_max;
};

ScalerParams fit_scaler(const Dataset& data, ScalerKind kind);

// Standard: (x - mean) / std, constant columns map to 0.
// MinMax: (x - min) / (max - min), constant columns map to 0.
// Throws errc::dimension_mismatch if feature counts differ.
Dataset apply_scaler(const Dataset& data, const ScalerParams& params);

// Scales one feature row in place; used at predict time.
void apply_scaler_row(std::span<double> row, const ScalerParams& params);

// Per class, round(val_fraction * class_count) rows go to validation,
// chosen by a seeded shuffle. Same seed, same split. Row order inside each
// partition follows the original dataset order.
// Throws errc::class_too_small if any class has fewer than 2 rows.
std::pair<Dataset, Dataset> stratified_split(const Dataset& data,
                                             double val_fraction,
                                             std::uint64_t seed);

}  // namespace genreforge
