#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "genreforge/features.hpp"
#include "genreforge/preprocess.hpp"

namespace genreforge {

// One extracted clip: source path, genre label, 70 feature values.
struct FeatureRow {
  std::string path;
  std::string label;
  std::vector<double> values;
};

// Header is "path,label" + the schema column names; values are written with
// 9 significant digits, LF line endings, UTF-8. Fields containing commas or
// quotes are double-quoted.
void write_feature_csv(std::ostream& out, const std::vector<FeatureRow>& rows);
void write_feature_csv(const std::filesystem::path& path,
                       const std::vector<FeatureRow>& rows);

// Parses a CSV produced by write_feature_csv, validating the header against
// the schema. Throws errc::bad_config on schema mismatch or malformed rows,
// errc::io_error on unreadable paths.
std::vector<FeatureRow> read_feature_csv(std::istream& in);
std::vector<FeatureRow> read_feature_csv(const std::filesystem::path& path);

// Integer-encodes labels against their sorted unique vocabulary.
Dataset rows_to_dataset(const std::vector<FeatureRow>& rows);

}  // namespace genreforge
