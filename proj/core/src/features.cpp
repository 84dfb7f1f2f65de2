#include "genreforge/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "genreforge/errors.hpp"

namespace genreforge {

namespace {

constexpr double kLogFloor = 1e-10;

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

// Population std (divide by n), two-pass for precision.
MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) {
    const double d = v - out.mean;
    sq += d * d;
  }
  out.std = std::sqrt(sq / static_cast<double>(values.size()));
  return out;
}

}  // namespace

std::vector<std::string> feature_schema_for(std::size_t n_mfcc) {
  std::vector<std::string> names = {"zcr_mean",      "zcr_std",
                                    "centroid_mean", "centroid_std",
                                    "rolloff_mean",  "rolloff_std"};
  for (std::size_t i = 1; i <= n_mfcc; ++i)
    names.push_back("mfcc" + std::to_string(i) + "_mean");
  for (std::size_t i = 1; i <= n_mfcc; ++i)
    names.push_back("mfcc" + std::to_string(i) + "_std");
  for (std::size_t i = 1; i <= kNumChroma; ++i)
    names.push_back("chroma" + std::to_string(i) + "_mean");
  for (std::size_t i = 1; i <= kNumChroma; ++i)
    names.push_back("chroma" + std::to_string(i) + "_std");
  return names;
}

const std::vector<std::string>& feature_schema() {
  static const std::vector<std::string> schema = feature_schema_for(kNumMfcc);
  return schema;
}

double zero_crossing_rate(const AudioClip& clip) {
  const auto& x = clip.samples;
  if (x.size() < 2) {
    throw Error(errc::too_short, "ZCR needs at least 2 samples");
  }
  std::size_t crossings = 0;
  for (std::size_t t = 0; t + 1 < x.size(); ++t) {
    if (x[t] * x[t + 1] < 0.0) ++crossings;
  }
  return static_cast<double>(crossings) / static_cast<double>(x.size() - 1);
}

std::vector<double> spectral_centroid(const Spectrogram& spec) {
  std::vector<double> out(spec.num_frames(), 0.0);
  for (std::size_t i = 0; i < spec.num_frames(); ++i) {
    const auto row = spec.magnitudes.row(i);
    double weighted = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      weighted += spec.bin_freqs_hz[k] * row[k];
      total += row[k];
    }
    out[i] = total > 0.0 ? weighted / total : 0.0;
  }
  return out;
}

std::vector<double> spectral_rolloff(const Spectrogram& spec,
                                     const RolloffConfig& cfg) {
  if (!(cfg.p > 0.0) || cfg.p > 1.0) {
    throw std::invalid_argument("rolloff p must be in (0, 1]");
  }
  std::vector<double> out(spec.num_frames(), 0.0);
  for (std::size_t i = 0; i < spec.num_frames(); ++i) {
    const auto row = spec.magnitudes.row(i);
    double total = 0.0;
    for (double a : row) total += a;
    if (total <= 0.0) continue;
    const double threshold = cfg.p * total;
    double cumulative = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      cumulative += row[k];
      if (cumulative >= threshold) {
        out[i] = spec.bin_freqs_hz[k];
        break;
      }
    }
  }
  return out;
}

double mel_scale(double f_hz) {
  return 2595.0 * std::log10(1.0 + f_hz / 700.0);
}

double mel_from_scale(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterBank build_mel_filterbank(std::size_t n_mels, double fmin_hz,
                                   double fmax_hz, std::size_t num_bins,
                                   int sample_rate_hz) {
  if (n_mels < 1) {
    throw std::invalid_argument("n_mels must be >= 1");
  }
  if (!(fmin_hz >= 0.0 && fmin_hz < fmax_hz &&
        fmax_hz <= sample_rate_hz / 2.0)) {
    throw std::invalid_argument("need 0 <= fmin < fmax <= sample_rate/2");
  }
  if (num_bins < n_mels + 2) {
    throw std::invalid_argument("num_bins must be >= n_mels + 2");
  }

  // n_mels + 2 corner points, equally spaced on the mel scale.
  const double mel_lo = mel_scale(fmin_hz);
  const double mel_hi = mel_scale(fmax_hz);
  const double mel_step = (mel_hi - mel_lo) / static_cast<double>(n_mels + 1);
  std::vector<double> corners_hz(n_mels + 2);
  for (std::size_t i = 0; i < corners_hz.size(); ++i) {
    corners_hz[i] = mel_from_scale(mel_lo + mel_step * static_cast<double>(i));
  }

  // The frame length behind num_bins: bins = n/2 + 1.
  const double bin_width =
      sample_rate_hz / (2.0 * static_cast<double>(num_bins - 1));

  MelFilterBank bank;
  bank.n_mels = n_mels;
  bank.fmin_hz = fmin_hz;
  bank.fmax_hz = fmax_hz;
  bank.weights = Matrix(n_mels, num_bins);

  for (std::size_t m = 0; m < n_mels; ++m) {
    const double left = corners_hz[m];
    const double center = corners_hz[m + 1];
    const double right = corners_hz[m + 2];
    bool any_positive = false;
    for (std::size_t k = 0; k < num_bins; ++k) {
      const double f = bin_width * static_cast<double>(k);
      double w = 0.0;
      if (f > left && f < right) {
        w = f <= center ? (f - left) / (center - left)
                        : (right - f) / (right - center);
      }
      if (w > 0.0) {
        bank.weights(m, k) = w;
        any_positive = true;
      }
    }
    if (!any_positive) {
      throw Error(errc::degenerate_filter,
                  "filter " + std::to_string(m) +
                      " covers no FFT bin; lower n_mels or raise the "
                      "frequency resolution");
    }
  }
  return bank;
}

std::vector<double> dct2_orthonormal(std::span<const double> input) {
  const std::size_t n = input.size();
  std::vector<double> coeffs(n, 0.0);
  if (n == 0) return coeffs;
  const double norm0 = std::sqrt(1.0 / static_cast<double>(n));
  const double norm = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      acc += input[m] * std::cos(std::numbers::pi * static_cast<double>(j) *
                                 (2.0 * static_cast<double>(m) + 1.0) /
                                 (2.0 * static_cast<double>(n)));
    }
    coeffs[j] = (j == 0 ? norm0 : norm) * acc;
  }
  return coeffs;
}

std::vector<double> idct2_orthonormal(std::span<const double> coeffs) {
  const std::size_t n = coeffs.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  const double norm0 = std::sqrt(1.0 / static_cast<double>(n));
  const double norm = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t m = 0; m < n; ++m) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += (j == 0 ? norm0 : norm) * coeffs[j] *
             std::cos(std::numbers::pi * static_cast<double>(j) *
                      (2.0 * static_cast<double>(m) + 1.0) /
                      (2.0 * static_cast<double>(n)));
    }
    out[m] = acc;
  }
  return out;
}

Matrix mfcc(const Spectrogram& spec, const MelFilterBank& bank,
            std::size_t n_mfcc) {
  if (n_mfcc > bank.n_mels) {
    throw std::invalid_argument("n_mfcc must be <= n_mels");
  }
  if (bank.weights.cols() != spec.num_bins()) {
    throw Error(errc::dimension_mismatch,
                "filter bank bins != spectrogram bins");
  }

  const std::size_t n_mels = bank.n_mels;
  // DCT-II basis, orthonormal scaling, truncated to n_mfcc rows.
  Matrix dct(n_mfcc, n_mels);
  const double norm0 = std::sqrt(1.0 / static_cast<double>(n_mels));
  const double norm = std::sqrt(2.0 / static_cast<double>(n_mels));
  for (std::size_t j = 0; j < n_mfcc; ++j) {
    for (std::size_t m = 0; m < n_mels; ++m) {
      dct(j, m) = (j == 0 ? norm0 : norm) *
                  std::cos(std::numbers::pi * static_cast<double>(j) *
                           (2.0 * static_cast<double>(m) + 1.0) /
                           (2.0 * static_cast<double>(n_mels)));
    }
  }

  Matrix out(spec.num_frames(), n_mfcc);
  std::vector<double> log_mel(n_mels);
  for (std::size_t i = 0; i < spec.num_frames(); ++i) {
    const auto row = spec.magnitudes.row(i);
    for (std::size_t m = 0; m < n_mels; ++m) {
      const auto weights = bank.weights.row(m);
      double energy = 0.0;
      for (std::size_t k = 0; k < row.size(); ++k) {
        energy += weights[k] * row[k] * row[k];
      }
      log_mel[m] = std::log(energy + kLogFloor);
    }
    for (std::size_t j = 0; j < n_mfcc; ++j) {
      double acc = 0.0;
      for (std::size_t m = 0; m < n_mels; ++m) {
        acc += dct(j, m) * log_mel[m];
      }
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix chroma(const Spectrogram& spec, const ChromaConfig& cfg) {
  if (!(cfg.f_ref_hz > 0.0) || !(cfg.fmin_hz > 0.0)) {
    throw std::invalid_argument("chroma f_ref and fmin must be positive");
  }

  // Pitch class per bin; -1 marks excluded bins (below fmin, incl. DC).
  std::vector<int> bin_class(spec.num_bins(), -1);
  for (std::size_t k = 0; k < spec.num_bins(); ++k) {
    const double f = spec.bin_freqs_hz[k];
    if (f < cfg.fmin_hz) continue;
    double c = std::fmod(12.0 * std::log2(f / cfg.f_ref_hz), 12.0);
    if (c < 0.0) c += 12.0;
    bin_class[k] = static_cast<int>(std::round(c)) % 12;
  }

  Matrix out(spec.num_frames(), kNumChroma);
  for (std::size_t i = 0; i < spec.num_frames(); ++i) {
    const auto row = spec.magnitudes.row(i);
    double total = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (bin_class[k] < 0) continue;
      out(i, static_cast<std::size_t>(bin_class[k])) += row[k];
      total += row[k];
    }
    if (total > 0.0) {
      for (std::size_t c = 0; c < kNumChroma; ++c) {
        out(i, c) /= total;
      }
    }
  }
  return out;
}

FeatureVector extract_features(const AudioClip& clip,
                               const FeatureConfig& config) {
  const double zcr = zero_crossing_rate(clip);

  const Spectrogram spec = stft(clip, config.frame);
  const double fmax = config.mel_fmax_hz > 0.0
                          ? config.mel_fmax_hz
                          : clip.sample_rate_hz / 2.0;
  const MelFilterBank bank =
      build_mel_filterbank(config.n_mels, config.mel_fmin_hz, fmax,
                           spec.num_bins(), clip.sample_rate_hz);

  const std::vector<double> centroid = spectral_centroid(spec);
  const std::vector<double> rolloff = spectral_rolloff(spec, config.rolloff);
  const Matrix mfccs = mfcc(spec, bank, config.n_mfcc);
  const Matrix chromas = chroma(spec, config.chroma);

  FeatureVector fv;
  fv.values.reserve(kFeatureDim);
  // The whole-segment ZCR is a single value, so its std is 0 by definition.
  fv.values.push_back(zcr);
  fv.values.push_back(0.0);

  const MeanStd cen = mean_std(centroid);
  fv.values.push_back(cen.mean);
  fv.values.push_back(cen.std);
  const MeanStd rol = mean_std(rolloff);
  fv.values.push_back(rol.mean);
  fv.values.push_back(rol.std);

  const std::size_t frames = spec.num_frames();
  std::vector<double> column(frames);
  auto aggregate_columns = [&](const Matrix& m, std::size_t n_cols,
                               std::vector<MeanStd>& stats) {
    stats.resize(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) {
      for (std::size_t i = 0; i < frames; ++i) column[i] = m(i, c);
      stats[c] = mean_std(column);
    }
  };

  std::vector<MeanStd> stats;
  aggregate_columns(mfccs, config.n_mfcc, stats);
  for (const auto& s : stats) fv.values.push_back(s.mean);
  for (const auto& s : stats) fv.values.push_back(s.std);
  aggregate_columns(chromas, kNumChroma, stats);
  for (const auto& s : stats) fv.values.push_back(s.mean);
  for (const auto& s : stats) fv.values.push_back(s.std);

  return fv;
}

}  // namespace genreforge
