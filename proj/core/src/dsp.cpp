#include "genreforge/dsp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "genreforge/errors.hpp"

namespace genreforge {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void validate(const FrameConfig& config) {
  if (!is_power_of_two(config.frame_length)) {
    throw std::invalid_argument("frame_length must be a power of two");
  }
  if (config.hop_length == 0 || config.hop_length > config.frame_length) {
    throw std::invalid_argument("hop_length must be in (0, frame_length]");
  }
}

// Frame i, zero-padded past the end of the signal.
void copy_frame(const AudioClip& clip, const FrameConfig& config,
                std::size_t index, std::vector<double>& frame) {
  frame.assign(config.frame_length, 0.0);
  const std::size_t start = index * config.hop_length;
  const std::size_t avail =
      start < clip.samples.size()
          ? std::min(config.frame_length, clip.samples.size() - start)
          : 0;
  for (std::size_t i = 0; i < avail; ++i) {
    frame[i] = clip.samples[start + i];
  }
}

std::size_t frame_count(const AudioClip& clip, const FrameConfig& config) {
  return (clip.samples.size() + config.hop_length - 1) / config.hop_length;
}

}  // namespace

std::vector<double> hann_window(std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("hann_window: n must be >= 1");
  }
  std::vector<double> w(n, 1.0);
  if (n == 1) return w;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(step * static_cast<double>(i));
  }
  return w;
}

std::vector<std::vector<double>> frame_signal(const AudioClip& clip,
                                              const FrameConfig& config) {
  validate(config);
  if (clip.samples.empty()) {
    throw Error(errc::empty_audio, "cannot frame an empty clip");
  }
  const std::size_t n = frame_count(clip, config);
  std::vector<std::vector<double>> frames(n);
  for (std::size_t i = 0; i < n; ++i) {
    copy_frame(clip, config, i, frames[i]);
  }
  return frames;
}

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("FFT size must be a power of two");
  }
  bit_reverse_.resize(n);
  std::size_t log2n = 0;
  while ((std::size_t{1} << log2n) < n) ++log2n;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rev = 0;
    for (std::size_t b = 0; b < log2n; ++b) {
      if (i & (std::size_t{1} << b)) rev |= std::size_t{1} << (log2n - 1 - b);
    }
    bit_reverse_[i] = rev;
  }
  twiddles_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle =
        -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddles_[k] = {std::cos(angle), std::sin(angle)};
  }
}

void FftPlan::transform(std::span<const double> frame,
                        std::vector<std::complex<double>>& spectrum) const {
  if (frame.size() != n_) {
    throw Error(errc::dimension_mismatch, "frame length != FFT plan size");
  }
  spectrum.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    spectrum[bit_reverse_[i]] = frame[i];
  }
  // Iterative Cooley-Tukey, decimation in time.
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const auto w = twiddles_[j * stride];
        const auto u = spectrum[start + j];
        const auto t = w * spectrum[start + j + half];
        spectrum[start + j] = u + t;
        spectrum[start + j + half] = u - t;
      }
    }
  }
}

void FftPlan::magnitudes(std::span<const double> frame,
                         std::span<double> out) const {
  thread_local std::vector<std::complex<double>> spectrum;
  transform(frame, spectrum);
  const std::size_t bins = n_ / 2 + 1;
  if (out.size() != bins) {
    throw Error(errc::dimension_mismatch, "magnitude buffer size");
  }
  for (std::size_t k = 0; k < bins; ++k) {
    out[k] = std::abs(spectrum[k]);
  }
}

std::vector<double> fft_magnitude(std::span<const double> frame) {
  FftPlan plan(frame.size());
  std::vector<double> mags(frame.size() / 2 + 1);
  plan.magnitudes(frame, mags);
  return mags;
}

Spectrogram stft(const AudioClip& clip, const FrameConfig& config) {
  validate(config);
  if (clip.samples.empty()) {
    throw Error(errc::empty_audio, "cannot transform an empty clip");
  }

  const std::size_t n = config.frame_length;
  const std::size_t bins = n / 2 + 1;
  const std::size_t frames = frame_count(clip, config);

  Spectrogram spec;
  spec.sample_rate_hz = clip.sample_rate_hz;
  spec.config = config;
  spec.magnitudes = Matrix(frames, bins);
  spec.bin_freqs_hz.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    spec.bin_freqs_hz[k] = static_cast<double>(k) * clip.sample_rate_hz /
                           static_cast<double>(n);
  }

  const std::vector<double> window = config.window == Window::Hann
                                         ? hann_window(n)
                                         : std::vector<double>(n, 1.0);
  FftPlan plan(n);
  std::vector<double> frame;
  for (std::size_t i = 0; i < frames; ++i) {
    copy_frame(clip, config, i, frame);
    for (std::size_t j = 0; j < n; ++j) {
      frame[j] *= window[j];
    }
    plan.magnitudes(frame, spec.magnitudes.row(i));
  }
  return spec;
}

}  // namespace genreforge
