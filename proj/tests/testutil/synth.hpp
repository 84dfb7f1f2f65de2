#pragma once

// Deterministic fixtures: signals, labeled point clouds, and a scratch
// directory guard.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "genreforge/audio.hpp"
#include "genreforge/preprocess.hpp"

namespace testutil {

inline genreforge::AudioClip make_sine(double freq_hz, double seconds,
                                       int sample_rate, double amplitude = 1.0) {
  genreforge::AudioClip clip;
  clip.sample_rate_hz = sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  clip.samples.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    clip.samples[t] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz *
                                           static_cast<double>(t) / sample_rate);
  }
  return clip;
}

inline genreforge::AudioClip make_silence(double seconds, int sample_rate) {
  genreforge::AudioClip clip;
  clip.sample_rate_hz = sample_rate;
  clip.samples.assign(
      static_cast<std::size_t>(std::llround(seconds * sample_rate)), 0.0);
  return clip;
}

inline double uniform01(std::mt19937& rng) {
  return (static_cast<double>(rng()) + 0.5) / 4294967296.0;
}

// Box-Muller; two uniforms per draw, deterministic given the engine state.
inline double gaussian(std::mt19937& rng) {
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// `n_per_class` points per class, Gaussian around well-separated centers.
inline genreforge::Dataset make_blobs(std::size_t n_classes,
                                      std::size_t n_per_class,
                                      std::size_t n_features, double spread,
                                      std::uint32_t seed) {
  std::mt19937 rng(seed);
  genreforge::Dataset data;
  for (std::size_t c = 0; c < n_classes; ++c) {
    data.label_names.push_back("class" + std::to_string(c));
  }
  data.features =
      genreforge::Matrix(n_classes * n_per_class, n_features);
  data.labels.resize(n_classes * n_per_class);
  std::size_t row = 0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    for (std::size_t i = 0; i < n_per_class; ++i, ++row) {
      data.labels[row] = static_cast<int>(c);
      for (std::size_t f = 0; f < n_features; ++f) {
        const double center = (f % n_classes) == c ? 4.0 : 0.0;
        data.features(row, f) = center + spread * gaussian(rng);
      }
    }
  }
  return data;
}

// Uniform noise features with random labels; no structure by construction.
inline genreforge::Dataset make_random_dataset(std::size_t n_samples,
                                               std::size_t n_features,
                                               std::size_t n_classes,
                                               std::uint32_t seed) {
  std::mt19937 rng(seed);
  genreforge::Dataset data;
  for (std::size_t c = 0; c < n_classes; ++c) {
    data.label_names.push_back("class" + std::to_string(c));
  }
  data.features = genreforge::Matrix(n_samples, n_features);
  data.labels.resize(n_samples);
  for (std::size_t r = 0; r < n_samples; ++r) {
    data.labels[r] = static_cast<int>(rng() % n_classes);
    for (std::size_t f = 0; f < n_features; ++f) {
      data.features(r, f) = 2.0 * uniform01(rng) - 1.0;
    }
  }
  return data;
}

// The four XOR corners, replicated with slight jitter.
inline genreforge::Dataset make_xor_dataset(std::size_t n_per_corner,
                                            std::uint32_t seed) {
  std::mt19937 rng(seed);
  genreforge::Dataset data;
  data.label_names = {"off", "on"};
  data.features = genreforge::Matrix(4 * n_per_corner, 2);
  data.labels.resize(4 * n_per_corner);
  std::size_t row = 0;
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) {
      for (std::size_t i = 0; i < n_per_corner; ++i, ++row) {
        data.features(row, 0) = a + 0.05 * (uniform01(rng) - 0.5);
        data.features(row, 1) = b + 0.05 * (uniform01(rng) - 0.5);
        data.labels[row] = a ^ b;
      }
    }
  }
  return data;
}

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    static const auto run_id = static_cast<unsigned long long>(
        std::chrono::steady_clock::now().time_since_epoch().count());
    path_ = std::filesystem::temp_directory_path() /
            ("genreforge_" + tag + "_" + std::to_string(run_id) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
