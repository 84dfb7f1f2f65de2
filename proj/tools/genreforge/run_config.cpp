#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "genreforge/errors.hpp"

namespace genreforge::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') {
    throw Error(errc::bad_config, key + ": bad number '" + value + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v < 0.0 || v != std::floor(v)) {
    throw Error(errc::bad_config, key + ": expected a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<std::size_t> parse_size_list(const std::string& key,
                                         const std::string& value) {
  std::vector<std::size_t> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(static_cast<std::size_t>(parse_uint(key, item)));
  }
  return out;
}

}  // namespace

CompareConfig RunConfig::compare_config() const {
  CompareConfig out;
  out.knn = knn;
  out.logreg = logreg;
  out.forest = forest;
  out.mlp = mlp;
  out.segment_duration_s = segment_s;
  return out;
}

void apply_config_line(RunConfig& config, const std::string& raw_key,
                       const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);

  if (key == "frame_length") {
    config.analysis.frame.frame_length =
        static_cast<std::size_t>(parse_uint(key, value));
  } else if (key == "hop_length") {
    config.analysis.frame.hop_length =
        static_cast<std::size_t>(parse_uint(key, value));
  } else if (key == "window") {
    if (value == "hann") {
      config.analysis.frame.window = Window::Hann;
    } else if (value == "rectangular") {
      config.analysis.frame.window = Window::Rectangular;
    } else {
      throw Error(errc::bad_config, "window: 'hann' or 'rectangular'");
    }
  } else if (key == "n_mels") {
    config.analysis.n_mels = static_cast<std::size_t>(parse_uint(key, value));
  } else if (key == "n_mfcc") {
    config.analysis.n_mfcc = static_cast<std::size_t>(parse_uint(key, value));
  } else if (key == "mel_fmin") {
    config.analysis.mel_fmin_hz = parse_double(key, value);
  } else if (key == "mel_fmax") {
    config.analysis.mel_fmax_hz = parse_double(key, value);
  } else if (key == "rolloff_p") {
    config.analysis.rolloff.p = parse_double(key, value);
  } else if (key == "chroma_f_ref") {
    config.analysis.chroma.f_ref_hz = parse_double(key, value);
  } else if (key == "chroma_fmin") {
    config.analysis.chroma.fmin_hz = parse_double(key, value);
  } else if (key == "segment_s") {
    config.segment_s = parse_double(key, value);
  } else if (key == "val_fraction") {
    config.val_fraction = parse_double(key, value);
  } else if (key == "seed") {
    config.seed = parse_uint(key, value);
    config.forest.seed = config.seed;
    config.mlp.seed = config.seed;
  } else if (key == "scaler") {
    if (value == "standard") {
      config.scaler = ScalerKind::Standard;
    } else if (value == "minmax") {
      config.scaler = ScalerKind::MinMax;
    } else {
      throw Error(errc::bad_config, "scaler: 'standard' or 'minmax'");
    }
  } else if (key == "knn_k") {
    config.knn.k = static_cast<std::size_t>(parse_uint(key, value));
  } else if (key == "knn_distance") {
    if (value == "euclidean") {
      config.knn.distance = Distance::Euclidean;
    } else if (value == "manhattan") {
      config.knn.distance = Distance::Manhattan;
    } else {
      throw Error(errc::bad_config, "knn_distance: 'euclidean' or 'manhattan'");
    }
  } else if (key == "logreg_lr") {
    config.logreg.learning_rate = parse_double(key, value);
  } else if (key == "logreg_epochs") {
    config.logreg.epochs = static_cast<std::size_t>(parse_uint(key, value));
  } else if (key == "forest_trees") {
    config.forest.n_estimators =
        static_cast<std::size_t>(parse_uint(key, value));
  } else if (key == "forest_depth") {
    config.forest.max_depth = static_cast<std::size_t>(parse_uint(key, value));
  } else if (key == "mlp_hidden") {
    config.mlp.hidden = parse_size_list(key, value);
  } else if (key == "mlp_lr") {
    config.mlp.learning_rate = parse_double(key, value);
  } else if (key == "mlp_epochs") {
    config.mlp.epochs = static_cast<std::size_t>(parse_uint(key, value));
  } else if (key == "mlp_batch") {
    config.mlp.batch_size = static_cast<std::size_t>(parse_uint(key, value));
  } else if (key == "jobs") {
    config.jobs = static_cast<std::size_t>(parse_uint(key, value));
  } else {
    throw Error(errc::bad_config, "unknown config key '" + key + "'");
  }
}

void load_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(errc::io_error, "cannot open config " + path.string());
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(errc::bad_config,
                  path.string() + ":" + std::to_string(line_no) +
                      ": expected key = value");
    }
    apply_config_line(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

void apply_overrides(RunConfig& config,
                     const std::vector<std::string>& key_value_pairs) {
  for (const auto& pair : key_value_pairs) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos) {
      throw Error(errc::bad_config, "--set expects key=value, got '" + pair +
                                        "'");
    }
    apply_config_line(config, pair.substr(0, eq), pair.substr(eq + 1));
  }
}

}  // namespace genreforge::cli
