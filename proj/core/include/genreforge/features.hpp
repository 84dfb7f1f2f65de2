#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "genreforge/audio.hpp"
#include "genreforge/dsp.hpp"
#include "genreforge/matrix.hpp"

namespace genreforge {

// Triangular filters with corners equally spaced on the mel scale.
// weights is [n_mels x num_bins], evaluated at FFT bin center frequencies.
struct MelFilterBank {
  std::size_t n_mels = 0;
  double fmin_hz = 0.0;
  double fmax_hz = 0.0;
  Matrix weights;
};

struct ChromaConfig {
  double f_ref_hz = 32.703;  // pitch C1; class 0 = pitch class C
  double fmin_hz = 20.0;     // bins below this (incl. DC) are excluded
};

struct RolloffConfig {
  double p = 0.85;
};

// Everything extract_features needs; defaults match the shipped pipeline.
struct FeatureConfig {
  FrameConfig frame;
  std::size_t n_mels = 40;
  std::size_t n_mfcc = 20;
  double mel_fmin_hz = 0.0;
  double mel_fmax_hz = 0.0;  // 0 means sample_rate / 2
  RolloffConfig rolloff;
  ChromaConfig chroma;
};

inline constexpr std::size_t kNumMfcc = 20;
inline constexpr std::size_t kNumChroma = 12;
inline constexpr std::size_t kFeatureDim = 2 + 2 + 2 + 2 * kNumMfcc + 2 * kNumChroma;

// Column names, in serialization order: zcr, centroid, rolloff (mean, std
// each), then mfcc1..20 means, mfcc1..20 stds, chroma1..12 means,
// chroma1..12 stds.
const std::vector<std::string>& feature_schema();

// Same layout for a non-default MFCC count (6 + 2*n_mfcc + 24 columns).
std::vector<std::string> feature_schema_for(std::size_t n_mfcc);

// One fixed-order row per clip; values follows feature_schema().
struct FeatureVector {
  std::vector<double> values;
};

// ZCR = 1/(T-1) * sum 1(x_t * x_{t+1} < 0), over the whole signal.
// Strict inequality: a zero sample never counts as a crossing.
// Throws errc::too_short for T < 2.
double zero_crossing_rate(const AudioClip& clip);

// Per-frame amplitude-weighted mean frequency; silent frames yield 0.
std::vector<double> spectral_centroid(const Spectrogram& spec);

// Per-frame frequency of the lowest bin where the cumulative amplitude
// reaches p * total; silent frames yield 0.
std::vector<double> spectral_rolloff(const Spectrogram& spec,
                                     const RolloffConfig& cfg);

// Mel(f) = 2595 * log10(1 + f/700), and its inverse.
double mel_scale(double f_hz);
double mel_from_scale(double mel);

// Throws errc::degenerate_filter if a filter has no strictly positive
// weight (n_mels too large for the FFT resolution).
MelFilterBank build_mel_filterbank(std::size_t n_mels, double fmin_hz,
                                   double fmax_hz, std::size_t num_bins,
                                   int sample_rate_hz);

// Mel energies from the power spectrum, ln(e + 1e-10), orthonormal DCT-II
// over the mel axis; first n_mfcc coefficients per frame.
Matrix mfcc(const Spectrogram& spec, const MelFilterBank& bank,
            std::size_t n_mfcc);

// Folds each bin's magnitude into its nearest pitch class via
// C(f) = mod(12*log2(f/f_ref), 12). Rows are L1-normalized; silent frames
// stay all-zero.
Matrix chroma(const Spectrogram& spec, const ChromaConfig& cfg);

// Whole-segment ZCR plus per-frame centroid/rolloff/MFCC/chroma aggregated
// to (mean, population std) in schema order.
FeatureVector extract_features(const AudioClip& clip,
                               const FeatureConfig& config = {});

// Orthonormal DCT-II over `input` and its inverse (DCT-III).
std::vector<double> dct2_orthonormal(std::span<const double> input);
std::vector<double> idct2_orthonormal(std::span<const double> coeffs);

}  // namespace genreforge
