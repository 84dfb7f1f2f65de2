#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "genreforge/features.hpp"
#include "genreforge/forest.hpp"
#include "genreforge/knn.hpp"
#include "genreforge/logreg.hpp"
#include "genreforge/mlp.hpp"
#include "genreforge/preprocess.hpp"

namespace genreforge {

inline constexpr int kModelFormatVersion = 1;

enum class ModelKind { Knn, LogReg, Forest, Mlp };

std::string_view model_kind_name(ModelKind kind) noexcept;
ModelKind model_kind_from_name(std::string_view name);  // errc::bad_config

// Everything predict needs beyond the fitted parameters: the label
// vocabulary, the feature schema, the fitted scaler, and the analysis
// settings the features were extracted with.
struct ModelMetadata {
  std::vector<std::string> label_names;
  std::vector<std::string> feature_schema;
  ScalerParams scaler;
  std::uint64_t split_seed = 42;
  double val_fraction = 0.2;
  FeatureConfig analysis;
  double segment_duration_s = 30.0;
};

struct Prediction {
  int class_index = 0;
  std::vector<double> scores;  // per class; votes, sigmoids or probabilities
};

// Tagged union over the four fitted classifiers.
struct TrainedModel {
  std::variant<KnnModel, LogRegModel, ForestModel, MlpModel> model;
  ModelMetadata meta;

  ModelKind kind() const noexcept {
    return static_cast<ModelKind>(model.index());
  }

  // Applies the stored scaler and dispatches to the fitted classifier.
  // The returned scores are vote fractions (KNN/forest), raw sigmoids
  // (logreg) or softmax probabilities (MLP).
  Prediction predict(std::span<const double> raw_features) const;
};

// Versioned UTF-8 JSON document; doubles carry 17 significant digits so a
// save/load round-trip reproduces predictions bit-identically.
// Throws errc::io_error on unwritable paths.
void save_model(const TrainedModel& model, const std::filesystem::path& path);

// Throws errc::unsupported_version for a bumped format_version and
// errc::corrupt_model_file for anything unreadable or truncated.
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace genreforge
