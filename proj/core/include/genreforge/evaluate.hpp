#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genreforge/model.hpp"
#include "genreforge/preprocess.hpp"

namespace genreforge {

// Rows are actual classes, columns are predicted.
struct ConfusionMatrix {
  std::vector<std::vector<std::int64_t>> counts;
  std::vector<std::string> label_names;

  std::int64_t total() const;
  std::int64_t trace() const;
  std::int64_t row_sum(std::size_t i) const;
};

// Fraction of exact matches. Throws errc::length_mismatch, errc::empty_input.
double accuracy(std::span<const int> predictions, std::span<const int> truth);

// counts[actual][predicted] incremented per sample.
// Throws errc::length_mismatch, errc::index_out_of_range.
ConfusionMatrix confusion(std::span<const int> predictions,
                          std::span<const int> truth,
                          std::vector<std::string> label_names);

struct CompareConfig {
  KnnConfig knn;
  LogRegConfig logreg;
  ForestConfig forest;
  MlpConfig mlp;
  std::vector<ModelKind> kinds = {ModelKind::Knn, ModelKind::LogReg,
                                  ModelKind::Forest, ModelKind::Mlp};
  double segment_duration_s = 30.0;
};

struct EvalEntry {
  ModelKind kind = ModelKind::Knn;
  double segment_duration_s = 30.0;
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
  ConfusionMatrix confusion_val;
  std::string error;  // non-empty when the fit failed

  bool ok() const { return error.empty(); }
};

// Entries sorted by descending validation accuracy; failed fits sink to the
// bottom with their error note. best_index flags the top model.
struct EvalReport {
  std::vector<EvalEntry> entries;
  std::size_t best_index = 0;
};

// Fits every configured model on train, evaluates on both partitions.
// A failing model becomes an error entry instead of aborting the rest.
EvalReport compare_models(const Dataset& train, const Dataset& val,
                          const CompareConfig& config);

// Human-readable aligned table (classifier / segment / accuracies).
std::string format_report_table(const EvalReport& report);

// Machine-readable JSON mirror of the report.
std::string report_to_json(const EvalReport& report);

// CSV with label names as header row and column.
std::string confusion_to_csv(const ConfusionMatrix& matrix);

// Standalone SVG heat map with per-cell counts.
std::string confusion_to_svg(const ConfusionMatrix& matrix);

}  // namespace genreforge
