#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "genreforge/audio.hpp"
#include "genreforge/errors.hpp"
#include "genreforge/evaluate.hpp"
#include "genreforge/feature_csv.hpp"
#include "genreforge/features.hpp"
#include "genreforge/model.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace genreforge;
using cli::RunConfig;

namespace {

// Exit codes: 0 success, 1 operational failure, 2 empty/invalid corpus.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kEmptyCorpus = 2;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case errc::no_audio_found:
    case errc::not_a_directory:
      return kEmptyCorpus;
    default:
      return kFailure;
  }
}

std::vector<FeatureRow> extract_rows(const DatasetManifest& manifest,
                                     const RunConfig& config) {
  const std::size_t n = manifest.entries.size();
  std::vector<std::optional<FeatureRow>> slots(n);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      const auto& entry = manifest.entries[i];
      try {
        const auto clip = decode_wav_file(entry.file_path);
        const auto segment = take_segment(clip, config.segment_s);
        auto features = extract_features(segment, config.analysis);
        slots[i] = FeatureRow{entry.file_path.string(), entry.genre_label,
                              std::move(features.values)};
      } catch (const std::exception& e) {
        const std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << "warning: skipped " << entry.file_path.string() << ": "
                  << e.what() << '\n';
      }
    }
  };

  std::size_t jobs = config.jobs > 0
                         ? config.jobs
                         : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, n);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Row order follows the manifest (sorted by path), not completion order.
  std::vector<FeatureRow> rows;
  rows.reserve(n);
  for (auto& slot : slots) {
    if (slot) rows.push_back(std::move(*slot));
  }
  return rows;
}

int cmd_extract(const fs::path& data_dir, const fs::path& out_csv,
                const RunConfig& config) {
  const auto manifest = scan_dataset(data_dir);
  const auto rows = extract_rows(manifest, config);
  if (rows.empty()) {
    std::cerr << "error: no decodable audio under " << data_dir.string()
              << '\n';
    return kFailure;
  }
  write_feature_csv(out_csv, rows);
  std::cerr << "wrote " << rows.size() << " rows ("
            << manifest.entries.size() - rows.size() << " skipped) to "
            << out_csv.string() << '\n';
  return kOk;
}

TrainedModel fit_model(ModelKind kind, const Dataset& train,
                       const RunConfig& config) {
  TrainedModel model;
  switch (kind) {
    case ModelKind::Knn: model.model = knn_fit(train, config.knn); break;
    case ModelKind::LogReg:
      model.model = logreg_fit(train, config.logreg);
      break;
    case ModelKind::Forest:
      model.model = forest_fit(train, config.forest);
      break;
    case ModelKind::Mlp: model.model = mlp_fit(train, config.mlp); break;
  }
  return model;
}

int predict_with(const TrainedModel& model, const Dataset& data,
                 std::vector<int>& out) {
  out.resize(data.n_samples());
  for (std::size_t r = 0; r < data.n_samples(); ++r) {
    const auto row = data.features.row(r);
    switch (model.kind()) {
      case ModelKind::Knn:
        out[r] = knn_predict(std::get<KnnModel>(model.model), row).class_index;
        break;
      case ModelKind::LogReg:
        out[r] =
            logreg_predict(std::get<LogRegModel>(model.model), row).class_index;
        break;
      case ModelKind::Forest:
        out[r] =
            forest_predict(std::get<ForestModel>(model.model), row).class_index;
        break;
      case ModelKind::Mlp:
        out[r] = mlp_predict(std::get<MlpModel>(model.model), row).class_index;
        break;
    }
  }
  return kOk;
}

int cmd_train(const fs::path& features_csv, const std::string& model_name,
              const fs::path& out_model, const RunConfig& config) {
  const auto kind = model_kind_from_name(model_name);
  const auto rows = read_feature_csv(features_csv);
  const auto data = rows_to_dataset(rows);

  const auto [train, val] = stratified_split(data, config.val_fraction,
                                             config.seed);
  const auto scaler = fit_scaler(train, config.scaler);
  const auto train_scaled = apply_scaler(train, scaler);
  const auto val_scaled = apply_scaler(val, scaler);

  auto model = fit_model(kind, train_scaled, config);
  model.meta.label_names = data.label_names;
  model.meta.feature_schema = data.feature_names;
  model.meta.scaler = scaler;
  model.meta.split_seed = config.seed;
  model.meta.val_fraction = config.val_fraction;
  model.meta.analysis = config.analysis;
  model.meta.segment_duration_s = config.segment_s;

  std::vector<int> predictions;
  predict_with(model, train_scaled, predictions);
  std::printf("train_accuracy: %.4f\n", accuracy(predictions, train.labels));
  predict_with(model, val_scaled, predictions);
  std::printf("val_accuracy: %.4f\n", accuracy(predictions, val.labels));

  save_model(model, out_model);
  std::cerr << "wrote model to " << out_model.string() << '\n';
  return kOk;
}

int cmd_predict(const fs::path& model_file, const fs::path& audio_path) {
  const auto model = load_model(model_file);
  const auto clip = decode_wav_file(audio_path);
  const auto segment = take_segment(clip, model.meta.segment_duration_s);
  const auto features = extract_features(segment, model.meta.analysis);
  const auto prediction = model.predict(features.values);

  const auto& labels = model.meta.label_names;
  std::printf("prediction: %s\n",
              labels[static_cast<std::size_t>(prediction.class_index)].c_str());
  std::printf("scores:");
  for (std::size_t c = 0; c < prediction.scores.size(); ++c) {
    std::printf(" %s=%.4f", labels[c].c_str(), prediction.scores[c]);
  }
  std::printf("\n");
  return kOk;
}

int cmd_compare(const fs::path& features_csv, const fs::path& out_dir,
                const RunConfig& config) {
  const auto rows = read_feature_csv(features_csv);
  const auto data = rows_to_dataset(rows);
  const auto [train, val] = stratified_split(data, config.val_fraction,
                                             config.seed);
  const auto scaler = fit_scaler(train, config.scaler);
  const auto train_scaled = apply_scaler(train, scaler);
  const auto val_scaled = apply_scaler(val, scaler);

  const auto report =
      compare_models(train_scaled, val_scaled, config.compare_config());

  bool any_ok = false;
  for (const auto& entry : report.entries) any_ok = any_ok || entry.ok();

  fs::create_directories(out_dir);
  const auto table = format_report_table(report);
  std::fputs(table.c_str(), stdout);
  std::ofstream(out_dir / "report.txt") << table;
  std::ofstream(out_dir / "report.json") << report_to_json(report) << '\n';

  if (any_ok) {
    const auto& best = report.entries[report.best_index];
    std::ofstream(out_dir / "confusion.csv")
        << confusion_to_csv(best.confusion_val);
    std::ofstream(out_dir / "confusion.svg")
        << confusion_to_svg(best.confusion_val);
  }
  std::cerr << "wrote report files to " << out_dir.string() << '\n';
  return any_ok ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Music genre classification toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;

  auto add_config_options = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "Flat key = value config file");
    cmd->add_option("--set", overrides,
                    "Override a config key, e.g. --set seed=7");
  };

  std::string data_dir;
  std::string out_path;
  std::string features_csv;
  std::string model_name;
  std::string model_file;
  std::string audio_file;
  std::string out_dir;

  auto* extract = app.add_subcommand(
      "extract", "Decode a <root>/<genre>/*.wav tree into a feature CSV");
  extract->add_option("--data", data_dir, "Dataset root directory")
      ->required();
  extract->add_option("--out", out_path, "Output CSV path")->required();
  add_config_options(extract);

  auto* train = app.add_subcommand(
      "train", "Train one classifier from a feature CSV");
  train->add_option("--features", features_csv, "Feature CSV")->required();
  train->add_option("--model", model_name, "knn|logreg|forest|mlp")
      ->required();
  train->add_option("--out", out_path, "Output model file")->required();
  add_config_options(train);

  auto* predict = app.add_subcommand(
      "predict", "Classify one audio file with a saved model");
  predict->add_option("--model", model_file, "Model file")->required();
  predict->add_option("audio", audio_file, "Input .wav file")->required();
  add_config_options(predict);

  auto* compare = app.add_subcommand(
      "compare", "Train all four classifiers and write the report files");
  compare->add_option("--features", features_csv, "Feature CSV")->required();
  compare->add_option("--out-dir", out_dir, "Report output directory")
      ->required();
  add_config_options(compare);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig config;
    if (!config_path.empty()) {
      cli::load_config_file(config, config_path);
    }
    cli::apply_overrides(config, overrides);

    if (extract->parsed()) {
      return cmd_extract(data_dir, out_path, config);
    }
    if (train->parsed()) {
      return cmd_train(features_csv, model_name, out_path, config);
    }
    if (predict->parsed()) {
      return cmd_predict(model_file, audio_file);
    }
    if (compare->parsed()) {
      return cmd_compare(features_csv, out_dir, config);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
