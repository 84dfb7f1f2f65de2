#include "genreforge/model.hpp"

#include <fstream>

#include <json.hpp>

#include "detail/json_writer.hpp"
#include "genreforge/errors.hpp"

namespace genreforge {

using detail::JsonWriter;
using nlohmann::json;

std::string_view model_kind_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Knn: return "knn";
    case ModelKind::LogReg: return "logreg";
    case ModelKind::Forest: return "forest";
    case ModelKind::Mlp: return "mlp";
  }
  return "unknown";
}

ModelKind model_kind_from_name(std::string_view name) {
  if (name == "knn") return ModelKind::Knn;
  if (name == "logreg") return ModelKind::LogReg;
  if (name == "forest") return ModelKind::Forest;
  if (name == "mlp") return ModelKind::Mlp;
  throw Error(errc::bad_config, "unknown model kind '" + std::string(name) +
                                    "' (knn|logreg|forest|mlp)");
}

namespace {

void write_double_array(JsonWriter& w, std::span<const double> values) {
  w.begin_array();
  for (double v : values) w.value(v);
  w.end_array();
}

void write_matrix(JsonWriter& w, const Matrix& m) {
  w.begin_array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    write_double_array(w, m.row(r));
  }
  w.end_array();
}

void write_string_array(JsonWriter& w, const std::vector<std::string>& items) {
  w.begin_array();
  for (const auto& s : items) w.value(s);
  w.end_array();
}

void write_tree(JsonWriter& w, const DecisionTreeNode& node) {
  w.begin_object();
  if (node.is_leaf()) {
    w.key("counts");
    w.begin_array();
    for (auto c : node.class_counts) w.value(c);
    w.end_array();
  } else {
    w.key("feature");
    w.value(node.feature_index);
    w.key("threshold");
    w.value(node.threshold);
    w.key("left");
    write_tree(w, *node.left);
    w.key("right");
    write_tree(w, *node.right);
  }
  w.end_object();
}

void write_scaler(JsonWriter& w, const ScalerParams& scaler) {
  w.begin_object();
  w.key("kind");
  w.value(scaler.kind == ScalerKind::Standard ? "standard" : "minmax");
  w.key(scaler.kind == ScalerKind::Standard ? "mean" : "min");
  write_double_array(w, scaler.mean_or_min);
  w.key(scaler.kind == ScalerKind::Standard ? "std" : "max");
  write_double_array(w, scaler.std_or_max);
  w.end_object();
}

void write_analysis(JsonWriter& w, const FeatureConfig& a,
                    double segment_duration_s) {
  w.begin_object();
  w.key("frame_length");
  w.value(a.frame.frame_length);
  w.key("hop_length");
  w.value(a.frame.hop_length);
  w.key("window");
  w.value(a.frame.window == Window::Hann ? "hann" : "rectangular");
  w.key("n_mels");
  w.value(a.n_mels);
  w.key("n_mfcc");
  w.value(a.n_mfcc);
  w.key("mel_fmin_hz");
  w.value(a.mel_fmin_hz);
  w.key("mel_fmax_hz");
  w.value(a.mel_fmax_hz);
  w.key("rolloff_p");
  w.value(a.rolloff.p);
  w.key("chroma_f_ref_hz");
  w.value(a.chroma.f_ref_hz);
  w.key("chroma_fmin_hz");
  w.value(a.chroma.fmin_hz);
  w.key("segment_duration_s");
  w.value(segment_duration_s);
  w.end_object();
}

void write_parameters(JsonWriter& w, const KnnModel& m) {
  w.key("hyperparameters");
  w.begin_object();
  w.key("k");
  w.value(m.config.k);
  w.key("distance");
  w.value(m.config.distance == Distance::Euclidean ? "euclidean" : "manhattan");
  w.end_object();
  w.key("parameters");
  w.begin_object();
  w.key("n_classes");
  w.value(m.n_classes);
  w.key("train_labels");
  w.begin_array();
  for (int l : m.train_labels) w.value(l);
  w.end_array();
  w.key("train_features");
  write_matrix(w, m.train_features);
  w.end_object();
}

void write_parameters(JsonWriter& w, const LogRegModel& m) {
  w.key("hyperparameters");
  w.begin_object();
  w.key("learning_rate");
  w.value(m.config.learning_rate);
  w.key("epochs");
  w.value(m.config.epochs);
  w.end_object();
  w.key("parameters");
  w.begin_object();
  w.key("weights");
  write_matrix(w, m.weights);
  w.key("biases");
  write_double_array(w, m.biases);
  w.end_object();
}

void write_parameters(JsonWriter& w, const ForestModel& m) {
  w.key("hyperparameters");
  w.begin_object();
  w.key("n_estimators");
  w.value(m.config.n_estimators);
  w.key("max_depth");
  w.value(m.config.max_depth);
  w.key("criterion");
  w.value("gini");
  w.key("seed");
  w.value(m.config.seed);
  w.end_object();
  w.key("parameters");
  w.begin_object();
  w.key("n_classes");
  w.value(m.n_classes);
  w.key("n_features");
  w.value(m.n_features);
  w.key("trees");
  w.begin_array();
  for (const auto& tree : m.trees) write_tree(w, *tree);
  w.end_array();
  w.end_object();
}

void write_parameters(JsonWriter& w, const MlpModel& m) {
  w.key("hyperparameters");
  w.begin_object();
  w.key("hidden");
  w.begin_array();
  for (std::size_t h : m.config.hidden) w.value(h);
  w.end_array();
  w.key("learning_rate");
  w.value(m.config.learning_rate);
  w.key("epochs");
  w.value(m.config.epochs);
  w.key("batch_size");
  w.value(m.config.batch_size);
  w.key("seed");
  w.value(m.config.seed);
  w.end_object();
  w.key("parameters");
  w.begin_object();
  w.key("layers");
  w.begin_array();
  for (const auto& layer : m.layers) {
    w.begin_object();
    w.key("activation");
    w.value(layer.activation == Activation::ReLU ? "relu" : "softmax");
    w.key("weights");
    write_matrix(w, layer.weights);
    w.key("biases");
    write_double_array(w, layer.biases);
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

// ---- load helpers -------------------------------------------------------

Matrix matrix_from_json(const json& j) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows > 0 ? j.at(0).size() : 0;
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    if (row.size() != cols) {
      throw Error(errc::corrupt_model_file, "ragged matrix rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = row.at(c).get<double>();
    }
  }
  return m;
}

std::unique_ptr<DecisionTreeNode> tree_from_json(const json& j) {
  auto node = std::make_unique<DecisionTreeNode>();
  if (j.contains("counts")) {
    node->class_counts = j.at("counts").get<std::vector<std::int64_t>>();
    return node;
  }
  node->feature_index = j.at("feature").get<int>();
  node->threshold = j.at("threshold").get<double>();
  node->left = tree_from_json(j.at("left"));
  node->right = tree_from_json(j.at("right"));
  return node;
}

ScalerParams scaler_from_json(const json& j) {
  ScalerParams scaler;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "standard") {
    scaler.kind = ScalerKind::Standard;
    scaler.mean_or_min = j.at("mean").get<std::vector<double>>();
    scaler.std_or_max = j.at("std").get<std::vector<double>>();
  } else if (kind == "minmax") {
    scaler.kind = ScalerKind::MinMax;
    scaler.mean_or_min = j.at("min").get<std::vector<double>>();
    scaler.std_or_max = j.at("max").get<std::vector<double>>();
  } else {
    throw Error(errc::corrupt_model_file, "unknown scaler kind " + kind);
  }
  return scaler;
}

void analysis_from_json(const json& j, ModelMetadata& meta) {
  FeatureConfig& a = meta.analysis;
  a.frame.frame_length = j.at("frame_length").get<std::size_t>();
  a.frame.hop_length = j.at("hop_length").get<std::size_t>();
  a.frame.window = j.at("window").get<std::string>() == "hann"
                       ? Window::Hann
                       : Window::Rectangular;
  a.n_mels = j.at("n_mels").get<std::size_t>();
  a.n_mfcc = j.at("n_mfcc").get<std::size_t>();
  a.mel_fmin_hz = j.at("mel_fmin_hz").get<double>();
  a.mel_fmax_hz = j.at("mel_fmax_hz").get<double>();
  a.rolloff.p = j.at("rolloff_p").get<double>();
  a.chroma.f_ref_hz = j.at("chroma_f_ref_hz").get<double>();
  a.chroma.fmin_hz = j.at("chroma_fmin_hz").get<double>();
  meta.segment_duration_s = j.at("segment_duration_s").get<double>();
}

KnnModel knn_from_json(const json& hyper, const json& params) {
  KnnModel m;
  m.config.k = hyper.at("k").get<std::size_t>();
  m.config.distance = hyper.at("distance").get<std::string>() == "euclidean"
                          ? Distance::Euclidean
                          : Distance::Manhattan;
  m.n_classes = params.at("n_classes").get<std::size_t>();
  m.train_labels = params.at("train_labels").get<std::vector<int>>();
  m.train_features = matrix_from_json(params.at("train_features"));
  return m;
}

LogRegModel logreg_from_json(const json& hyper, const json& params) {
  LogRegModel m;
  m.config.learning_rate = hyper.at("learning_rate").get<double>();
  m.config.epochs = hyper.at("epochs").get<std::size_t>();
  m.weights = matrix_from_json(params.at("weights"));
  m.biases = params.at("biases").get<std::vector<double>>();
  return m;
}

ForestModel forest_from_json(const json& hyper, const json& params) {
  ForestModel m;
  m.config.n_estimators = hyper.at("n_estimators").get<std::size_t>();
  m.config.max_depth = hyper.at("max_depth").get<std::size_t>();
  m.config.seed = hyper.at("seed").get<std::uint64_t>();
  m.n_classes = params.at("n_classes").get<std::size_t>();
  m.n_features = params.at("n_features").get<std::size_t>();
  for (const auto& tree : params.at("trees")) {
    m.trees.push_back(tree_from_json(tree));
  }
  if (m.trees.size() != m.config.n_estimators) {
    throw Error(errc::corrupt_model_file, "tree count != n_estimators");
  }
  return m;
}

MlpModel mlp_from_json(const json& hyper, const json& params) {
  MlpModel m;
  m.config.hidden = hyper.at("hidden").get<std::vector<std::size_t>>();
  m.config.learning_rate = hyper.at("learning_rate").get<double>();
  m.config.epochs = hyper.at("epochs").get<std::size_t>();
  m.config.batch_size = hyper.at("batch_size").get<std::size_t>();
  m.config.seed = hyper.at("seed").get<std::uint64_t>();
  for (const auto& layer_json : params.at("layers")) {
    DenseLayer layer;
    layer.activation =
        layer_json.at("activation").get<std::string>() == "relu"
            ? Activation::ReLU
            : Activation::Softmax;
    layer.weights = matrix_from_json(layer_json.at("weights"));
    layer.biases = layer_json.at("biases").get<std::vector<double>>();
    m.layers.push_back(std::move(layer));
  }
  return m;
}

}  // namespace

Prediction TrainedModel::predict(std::span<const double> raw_features) const {
  std::vector<double> scaled(raw_features.begin(), raw_features.end());
  apply_scaler_row(scaled, meta.scaler);

  Prediction out;
  switch (kind()) {
    case ModelKind::Knn: {
      const auto& m = std::get<KnnModel>(model);
      const auto p = knn_predict(m, scaled);
      out.class_index = p.class_index;
      out.scores.resize(p.votes.size());
      for (std::size_t c = 0; c < p.votes.size(); ++c) {
        out.scores[c] = static_cast<double>(p.votes[c]) /
                        static_cast<double>(m.config.k);
      }
      break;
    }
    case ModelKind::LogReg: {
      const auto p = logreg_predict(std::get<LogRegModel>(model), scaled);
      out.class_index = p.class_index;
      out.scores = p.scores;
      break;
    }
    case ModelKind::Forest: {
      const auto& m = std::get<ForestModel>(model);
      const auto p = forest_predict(m, scaled);
      out.class_index = p.class_index;
      out.scores.resize(p.votes.size());
      for (std::size_t c = 0; c < p.votes.size(); ++c) {
        out.scores[c] = static_cast<double>(p.votes[c]) /
                        static_cast<double>(m.config.n_estimators);
      }
      break;
    }
    case ModelKind::Mlp: {
      const auto p = mlp_predict(std::get<MlpModel>(model), scaled);
      out.class_index = p.class_index;
      out.scores = p.probabilities;
      break;
    }
  }
  return out;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  JsonWriter w;
  w.begin_object();
  w.key("format_version");
  w.value(kModelFormatVersion);
  w.key("model_kind");
  w.value(model_kind_name(model.kind()));

  std::visit([&w](const auto& m) { write_parameters(w, m); }, model.model);

  w.key("scaler_params");
  write_scaler(w, model.meta.scaler);
  w.key("label_names");
  write_string_array(w, model.meta.label_names);
  w.key("feature_schema");
  write_string_array(w, model.meta.feature_schema);
  w.key("training_metadata");
  w.begin_object();
  w.key("seed");
  w.value(model.meta.split_seed);
  w.key("val_fraction");
  w.value(model.meta.val_fraction);
  w.key("analysis");
  write_analysis(w, model.meta.analysis, model.meta.segment_duration_s);
  w.end_object();
  w.end_object();

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(errc::io_error, "cannot write " + path.string());
  }
  out << w.str() << '\n';
  if (!out) {
    throw Error(errc::io_error, "short write to " + path.string());
  }
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(errc::corrupt_model_file, "cannot open " + path.string());
  }

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(errc::corrupt_model_file, e.what());
  }

  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(errc::unsupported_version,
                  "format_version " + std::to_string(version) +
                      ", this build reads " +
                      std::to_string(kModelFormatVersion));
    }

    TrainedModel model;
    const auto kind =
        model_kind_from_name(doc.at("model_kind").get<std::string>());
    const auto& hyper = doc.at("hyperparameters");
    const auto& params = doc.at("parameters");
    switch (kind) {
      case ModelKind::Knn: model.model = knn_from_json(hyper, params); break;
      case ModelKind::LogReg:
        model.model = logreg_from_json(hyper, params);
        break;
      case ModelKind::Forest:
        model.model = forest_from_json(hyper, params);
        break;
      case ModelKind::Mlp: model.model = mlp_from_json(hyper, params); break;
    }

    model.meta.scaler = scaler_from_json(doc.at("scaler_params"));
    model.meta.label_names =
        doc.at("label_names").get<std::vector<std::string>>();
    model.meta.feature_schema =
        doc.at("feature_schema").get<std::vector<std::string>>();
    const auto& training = doc.at("training_metadata");
    model.meta.split_seed = training.at("seed").get<std::uint64_t>();
    model.meta.val_fraction = training.at("val_fraction").get<double>();
    analysis_from_json(training.at("analysis"), model.meta);
    return model;
  } catch (const Error&) {
    throw;
  } catch (const json::exception& e) {
    throw Error(errc::corrupt_model_file, e.what());
  }
}

}  // namespace genreforge
