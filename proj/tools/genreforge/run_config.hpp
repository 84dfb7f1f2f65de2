#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "genreforge/evaluate.hpp"
#include "genreforge/features.hpp"
#include "genreforge/preprocess.hpp"

namespace genreforge::cli {

// One flat key = value document per experiment; every default equals the
// library defaults. Unknown keys are rejected.
struct RunConfig {
  FeatureConfig analysis;
  double segment_s = 30.0;
  double val_fraction = 0.2;
  std::uint64_t seed = 42;
  ScalerKind scaler = ScalerKind::Standard;
  KnnConfig knn;
  LogRegConfig logreg;
  ForestConfig forest;
  MlpConfig mlp;
  std::size_t jobs = 0;  // 0 = hardware concurrency

  CompareConfig compare_config() const;
};

// Throws errc::bad_config on unknown keys or unparsable values.
void apply_config_line(RunConfig& config, const std::string& key,
                       const std::string& value);
void load_config_file(RunConfig& config, const std::filesystem::path& path);
void apply_overrides(RunConfig& config,
                     const std::vector<std::string>& key_value_pairs);

}  // namespace genreforge::cli
