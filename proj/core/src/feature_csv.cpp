#include "genreforge/feature_csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "genreforge/errors.hpp"

namespace genreforge {

namespace {

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\n\r") != std::string::npos;
}

void write_field(std::ostream& out, const std::string& field) {
  if (!needs_quoting(field)) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

// Splits one CSV record, honoring double-quoted fields.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::size_t mfcc_count_for_width(std::size_t n_values) {
  // 6 scalar stats + 2*n_mfcc + 24 chroma stats.
  if (n_values < 32 || (n_values - 30) % 2 != 0) {
    throw Error(errc::bad_config,
                "row has " + std::to_string(n_values) +
                    " feature values, which matches no schema");
  }
  return (n_values - 30) / 2;
}

}  // namespace

void write_feature_csv(std::ostream& out, const std::vector<FeatureRow>& rows) {
  if (rows.empty()) {
    throw Error(errc::empty_input, "no feature rows to write");
  }
  const auto schema = feature_schema_for(mfcc_count_for_width(rows[0].values.size()));

  out << "path,label";
  for (const auto& name : schema) out << ',' << name;
  out << '\n';

  char buf[32];
  for (const auto& row : rows) {
    if (row.values.size() != schema.size()) {
      throw Error(errc::bad_config, "inconsistent feature widths across rows");
    }
    write_field(out, row.path);
    out << ',';
    write_field(out, row.label);
    for (double v : row.values) {
      std::snprintf(buf, sizeof(buf), "%.9g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

void write_feature_csv(const std::filesystem::path& path,
                       const std::vector<FeatureRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(errc::io_error, "cannot write " + path.string());
  }
  write_feature_csv(out, rows);
  if (!out) {
    throw Error(errc::io_error, "short write to " + path.string());
  }
}

std::vector<FeatureRow> read_feature_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(errc::bad_config, "empty CSV");
  }
  const auto header = split_record(line);
  if (header.size() < 3 || header[0] != "path" || header[1] != "label") {
    throw Error(errc::bad_config, "header must start with path,label");
  }
  const auto schema = feature_schema_for(mfcc_count_for_width(header.size() - 2));
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (header[i + 2] != schema[i]) {
      throw Error(errc::bad_config,
                  "header column " + std::to_string(i + 2) + " is '" +
                      header[i + 2] + "', expected '" + schema[i] + "'");
    }
  }

  std::vector<FeatureRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_record(line);
    if (fields.size() != header.size()) {
      throw Error(errc::bad_config,
                  "line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
    FeatureRow row;
    row.path = fields[0];
    row.label = fields[1];
    row.values.reserve(schema.size());
    for (std::size_t i = 2; i < fields.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(fields[i].c_str(), &end);
      if (end == fields[i].c_str() || *end != '\0') {
        throw Error(errc::bad_config,
                    "line " + std::to_string(line_no) +
                        ": bad numeric field '" + fields[i] + "'");
      }
      row.values.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw Error(errc::bad_config, "CSV holds a header but no rows");
  }
  return rows;
}

std::vector<FeatureRow> read_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(errc::io_error, "cannot open " + path.string());
  }
  return read_feature_csv(in);
}

Dataset rows_to_dataset(const std::vector<FeatureRow>& rows) {
  if (rows.empty()) {
    throw Error(errc::empty_input, "no rows");
  }
  std::set<std::string> labels;
  for (const auto& row : rows) labels.insert(row.label);

  Dataset data;
  data.label_names.assign(labels.begin(), labels.end());
  data.feature_names =
      feature_schema_for(mfcc_count_for_width(rows[0].values.size()));
  data.features = Matrix(rows.size(), rows[0].values.size());
  data.labels.resize(rows.size());

  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto it = std::lower_bound(data.label_names.begin(),
                                     data.label_names.end(), rows[r].label);
    data.labels[r] = static_cast<int>(it - data.label_names.begin());
    if (rows[r].values.size() != data.n_features()) {
      throw Error(errc::bad_config, "inconsistent feature widths");
    }
    std::copy(rows[r].values.begin(), rows[r].values.end(),
              data.features.row(r).begin());
  }
  return data;
}

}  // namespace genreforge
