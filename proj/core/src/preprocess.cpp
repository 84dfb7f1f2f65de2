#include "genreforge/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "detail/rng.hpp"
#include "genreforge/errors.hpp"

namespace genreforge {

ScalerParams fit_scaler(const Dataset& data, ScalerKind kind) {
  if (data.n_samples() == 0) {
    throw Error(errc::empty_input, "cannot fit a scaler on zero rows");
  }
  const std::size_t n = data.n_samples();
  const std::size_t d = data.n_features();

  ScalerParams params;
  params.kind = kind;
  params.mean_or_min.resize(d);
  params.std_or_max.resize(d);

  for (std::size_t c = 0; c < d; ++c) {
    if (kind == ScalerKind::Standard) {
      double sum = 0.0;
      for (std::size_t r = 0; r < n; ++r) sum += data.features(r, c);
      const double mean = sum / static_cast<double>(n);
      double sq = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        const double diff = data.features(r, c) - mean;
        sq += diff * diff;
      }
      params.mean_or_min[c] = mean;
      params.std_or_max[c] = std::sqrt(sq / static_cast<double>(n));
    } else {
      double lo = data.features(0, c);
      double hi = lo;
      for (std::size_t r = 1; r < n; ++r) {
        lo = std::min(lo, data.features(r, c));
        hi = std::max(hi, data.features(r, c));
      }
      params.mean_or_min[c] = lo;
      params.std_or_max[c] = hi;
    }
  }
  return params;
}

void apply_scaler_row(std::span<double> row, const ScalerParams& params) {
  if (row.size() != params.mean_or_min.size()) {
    throw Error(errc::dimension_mismatch, "row width != scaler width");
  }
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (params.kind == ScalerKind::Standard) {
      const double std = params.std_or_max[c];
      row[c] = std > 0.0 ? (row[c] - params.mean_or_min[c]) / std : 0.0;
    } else {
      const double range = params.std_or_max[c] - params.mean_or_min[c];
      row[c] = range > 0.0 ? (row[c] - params.mean_or_min[c]) / range : 0.0;
    }
  }
}

Dataset apply_scaler(const Dataset& data, const ScalerParams& params) {
  if (data.n_features() != params.mean_or_min.size()) {
    throw Error(errc::dimension_mismatch,
                "dataset width != scaler width");
  }
  Dataset out = data;
  for (std::size_t r = 0; r < out.n_samples(); ++r) {
    apply_scaler_row(out.features.row(r), params);
  }
  return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& data,
                                             double val_fraction,
                                             std::uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw std::invalid_argument("val_fraction must be in (0, 1)");
  }

  const std::size_t n_classes = data.label_names.size();
  std::vector<std::vector<std::size_t>> by_class(n_classes);
  for (std::size_t r = 0; r < data.n_samples(); ++r) {
    by_class[static_cast<std::size_t>(data.labels[r])].push_back(r);
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (by_class[c].size() < 2) {
      throw Error(errc::class_too_small,
                  "class '" + data.label_names[c] + "' has " +
                      std::to_string(by_class[c].size()) + " rows, need >= 2");
    }
  }

  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  std::vector<bool> in_val(data.n_samples(), false);
  for (std::size_t c = 0; c < n_classes; ++c) {
    auto rows = by_class[c];
    detail::rng_shuffle(rng, rows);
    const auto n_val = static_cast<std::size_t>(
        std::lround(val_fraction * static_cast<double>(rows.size())));
    for (std::size_t i = 0; i < n_val; ++i) in_val[rows[i]] = true;
  }

  auto gather = [&](bool want_val) {
    Dataset part;
    part.label_names = data.label_names;
    part.feature_names = data.feature_names;
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < data.n_samples(); ++r) {
      if (in_val[r] == want_val) rows.push_back(r);
    }
    part.features = Matrix(rows.size(), data.n_features());
    part.labels.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto src = data.features.row(rows[i]);
      std::copy(src.begin(), src.end(), part.features.row(i).begin());
      part.labels[i] = data.labels[rows[i]];
    }
    return part;
  };

  return {gather(false), gather(true)};
}

}  // namespace genreforge
