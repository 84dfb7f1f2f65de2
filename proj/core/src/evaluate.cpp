#include "genreforge/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "detail/json_writer.hpp"
#include "genreforge/errors.hpp"

namespace genreforge {

std::int64_t ConfusionMatrix::total() const {
  std::int64_t sum = 0;
  for (const auto& row : counts) {
    for (auto c : row) sum += c;
  }
  return sum;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) sum += counts[i][i];
  return sum;
}

std::int64_t ConfusionMatrix::row_sum(std::size_t i) const {
  std::int64_t sum = 0;
  for (auto c : counts[i]) sum += c;
  return sum;
}

double accuracy(std::span<const int> predictions, std::span<const int> truth) {
  if (predictions.size() != truth.size()) {
    throw Error(errc::length_mismatch,
                std::to_string(predictions.size()) + " predictions vs " +
                    std::to_string(truth.size()) + " truths");
  }
  if (predictions.empty()) {
    throw Error(errc::empty_input, "accuracy of zero samples");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == truth[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

ConfusionMatrix confusion(std::span<const int> predictions,
                          std::span<const int> truth,
                          std::vector<std::string> label_names) {
  if (predictions.size() != truth.size()) {
    throw Error(errc::length_mismatch,
                "prediction/truth length mismatch");
  }
  const auto n = static_cast<int>(label_names.size());
  ConfusionMatrix matrix;
  matrix.label_names = std::move(label_names);
  matrix.counts.assign(static_cast<std::size_t>(n),
                       std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= n || predictions[i] < 0 ||
        predictions[i] >= n) {
      throw Error(errc::index_out_of_range,
                  "class index outside [0, " + std::to_string(n) + ")");
    }
    matrix.counts[static_cast<std::size_t>(truth[i])]
                 [static_cast<std::size_t>(predictions[i])] += 1;
  }
  return matrix;
}

namespace {

std::string display_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Knn: return "KNN";
    case ModelKind::LogReg: return "Logistic Regression";
    case ModelKind::Forest: return "Random Forest";
    case ModelKind::Mlp: return "Neural Network";
  }
  return "?";
}

template <typename PredictFn>
std::vector<int> predict_all(const Dataset& data, PredictFn&& predict) {
  std::vector<int> out(data.n_samples());
  for (std::size_t r = 0; r < data.n_samples(); ++r) {
    out[r] = predict(data.features.row(r));
  }
  return out;
}

EvalEntry evaluate_one(ModelKind kind, const Dataset& train,
                       const Dataset& val, const CompareConfig& config) {
  EvalEntry entry;
  entry.kind = kind;
  entry.segment_duration_s = config.segment_duration_s;
  try {
    std::vector<int> train_pred;
    std::vector<int> val_pred;
    switch (kind) {
      case ModelKind::Knn: {
        const auto model = knn_fit(train, config.knn);
        auto p = [&](auto row) { return knn_predict(model, row).class_index; };
        train_pred = predict_all(train, p);
        val_pred = predict_all(val, p);
        break;
      }
      case ModelKind::LogReg: {
        const auto model = logreg_fit(train, config.logreg);
        auto p = [&](auto row) {
          return logreg_predict(model, row).class_index;
        };
        train_pred = predict_all(train, p);
        val_pred = predict_all(val, p);
        break;
      }
      case ModelKind::Forest: {
        const auto model = forest_fit(train, config.forest);
        auto p = [&](auto row) {
          return forest_predict(model, row).class_index;
        };
        train_pred = predict_all(train, p);
        val_pred = predict_all(val, p);
        break;
      }
      case ModelKind::Mlp: {
        const auto model = mlp_fit(train, config.mlp);
        auto p = [&](auto row) { return mlp_predict(model, row).class_index; };
        train_pred = predict_all(train, p);
        val_pred = predict_all(val, p);
        break;
      }
    }
    entry.train_accuracy = accuracy(train_pred, train.labels);
    entry.val_accuracy = accuracy(val_pred, val.labels);
    entry.confusion_val = confusion(val_pred, val.labels, val.label_names);
  } catch (const std::exception& e) {
    entry.error = e.what();
    entry.train_accuracy = 0.0;
    entry.val_accuracy = 0.0;
  }
  return entry;
}

}  // namespace

EvalReport compare_models(const Dataset& train, const Dataset& val,
                          const CompareConfig& config) {
  if (config.kinds.empty()) {
    throw Error(errc::empty_input, "no model configs to compare");
  }
  EvalReport report;
  for (ModelKind kind : config.kinds) {
    report.entries.push_back(evaluate_one(kind, train, val, config));
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const EvalEntry& a, const EvalEntry& b) {
                     if (a.ok() != b.ok()) return a.ok();
                     return a.val_accuracy > b.val_accuracy;
                   });
  report.best_index = 0;
  return report;
}

std::string format_report_table(const EvalReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-22s %-9s %-12s %-s\n", "Classifier",
                "Segment", "Train Acc", "Val Acc");
  out << line;
  out << std::string(56, '-') << '\n';
  for (const auto& entry : report.entries) {
    const std::string segment =
        std::to_string(static_cast<int>(std::lround(entry.segment_duration_s))) +
        "s";
    if (entry.ok()) {
      std::snprintf(line, sizeof(line), "%-22s %-9s %-12.2f %.2f%s\n",
                    display_name(entry.kind).c_str(), segment.c_str(),
                    100.0 * entry.train_accuracy, 100.0 * entry.val_accuracy,
                    &entry == &report.entries[report.best_index] ? "  <- best"
                                                                 : "");
    } else {
      std::snprintf(line, sizeof(line), "%-22s %-9s failed: %s\n",
                    display_name(entry.kind).c_str(), segment.c_str(),
                    entry.error.c_str());
    }
    out << line;
  }
  return out.str();
}

std::string report_to_json(const EvalReport& report) {
  detail::JsonWriter w;
  w.begin_object();
  w.key("best_model");
  w.value(report.entries.empty()
              ? ""
              : model_kind_name(report.entries[report.best_index].kind));
  w.key("entries");
  w.begin_array();
  for (const auto& entry : report.entries) {
    w.begin_object();
    w.key("model_kind");
    w.value(model_kind_name(entry.kind));
    w.key("segment_duration_s");
    w.value(entry.segment_duration_s);
    w.key("train_accuracy");
    w.value(entry.train_accuracy);
    w.key("val_accuracy");
    w.value(entry.val_accuracy);
    w.key("error");
    w.value(entry.error);
    if (entry.ok()) {
      w.key("confusion");
      w.begin_object();
      w.key("labels");
      w.begin_array();
      for (const auto& name : entry.confusion_val.label_names) w.value(name);
      w.end_array();
      w.key("counts");
      w.begin_array();
      for (const auto& row : entry.confusion_val.counts) {
        w.begin_array();
        for (auto c : row) w.value(c);
        w.end_array();
      }
      w.end_array();
      w.end_object();
    }
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string confusion_to_csv(const ConfusionMatrix& matrix) {
  std::ostringstream out;
  out << "actual\\predicted";
  for (const auto& name : matrix.label_names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < matrix.counts.size(); ++i) {
    out << matrix.label_names[i];
    for (auto c : matrix.counts[i]) out << ',' << c;
    out << '\n';
  }
  return out.str();
}

std::string confusion_to_svg(const ConfusionMatrix& matrix) {
  const std::size_t n = matrix.counts.size();
  const int cell = 56;
  const int left = 130;
  const int top = 110;
  const int width = left + cell * static_cast<int>(n) + 20;
  const int height = top + cell * static_cast<int>(n) + 20;

  std::int64_t max_count = 1;
  for (const auto& row : matrix.counts) {
    for (auto c : row) max_count = std::max(max_count, c);
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "  <text x=\"" << left + cell * static_cast<int>(n) / 2
      << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << "Predicted</text>\n";
  svg << "  <text x=\"18\" y=\"" << top + cell * static_cast<int>(n) / 2
      << "\" text-anchor=\"middle\" font-size=\"15\" transform=\"rotate(-90 18 "
      << top + cell * static_cast<int>(n) / 2 << ")\">Actual</text>\n";

  for (std::size_t j = 0; j < n; ++j) {
    const int x = left + static_cast<int>(j) * cell + cell / 2;
    svg << "  <text x=\"" << x << "\" y=\"" << top - 12
        << "\" text-anchor=\"end\" font-size=\"12\" transform=\"rotate(-40 "
        << x << " " << top - 12 << ")\">" << matrix.label_names[j]
        << "</text>\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    svg << "  <text x=\"" << left - 8 << "\" y=\""
        << top + static_cast<int>(i) * cell + cell / 2 + 4
        << "\" text-anchor=\"end\" font-size=\"12\">" << matrix.label_names[i]
        << "</text>\n";
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double intensity = static_cast<double>(matrix.counts[i][j]) /
                               static_cast<double>(max_count);
      const int r = static_cast<int>(std::lround(255 - 185 * intensity));
      const int g = static_cast<int>(std::lround(255 - 125 * intensity));
      const int b = 255;
      const int x = left + static_cast<int>(j) * cell;
      const int y = top + static_cast<int>(i) * cell;
      svg << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"rgb(" << r << ',' << g << ','
          << b << ")\" stroke=\"#999\"/>\n";
      svg << "  <text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 5
          << "\" text-anchor=\"middle\" font-size=\"14\" fill=\""
          << (intensity > 0.6 ? "white" : "black") << "\">"
          << matrix.counts[i][j] << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace genreforge
