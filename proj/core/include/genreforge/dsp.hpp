#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "genreforge/audio.hpp"
#include "genreforge/matrix.hpp"

namespace genreforge {

enum class Window { Hann, Rectangular };

struct FrameConfig {
  std::size_t frame_length = 2048;  // samples, power of two
  std::size_t hop_length = 512;     // 0 < hop <= frame_length
  Window window = Window::Hann;
};

// Per-frame magnitude spectra. magnitudes is [num_frames x (frame_length/2+1)],
// bin_freqs_hz[k] = k * sample_rate / frame_length.
struct Spectrogram {
  Matrix magnitudes;
  std::vector<double> bin_freqs_hz;
  int sample_rate_hz = 0;
  FrameConfig config;

  std::size_t num_frames() const { return magnitudes.rows(); }
  std::size_t num_bins() const { return magnitudes.cols(); }
};

// w[i] = 0.5 - 0.5*cos(2*pi*i/(n-1)); n == 1 yields [1.0].
std::vector<double> hann_window(std::size_t n);

// Frames start at 0, hop, 2*hop, ...; the trailing partial frame is
// zero-padded, so num_frames = ceil(T / hop) and every sample is covered.
std::vector<std::vector<double>> frame_signal(const AudioClip& clip,
                                              const FrameConfig& config);

// |DFT(frame)[k]| for k = 0..n/2. Frame length must be a power of two.
std::vector<double> fft_magnitude(std::span<const double> frame);

// frame_signal -> window multiply -> fft_magnitude, per frame.
Spectrogram stft(const AudioClip& clip, const FrameConfig& config);

// Radix-2 FFT with precomputed twiddles and bit-reversal table. Build one
// per frame size and reuse it across frames; transform() is const and
// thread-safe.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  // Full complex spectrum of a real input frame of size() samples.
  void transform(std::span<const double> frame,
                 std::vector<std::complex<double>>& spectrum) const;

  // Convenience: magnitudes of bins 0..n/2 appended into `out`.
  void magnitudes(std::span<const double> frame, std::span<double> out) const;

 private:
  std::size_t n_;
  std::vector<std::size_t> bit_reverse_;
  std::vector<std::complex<double>> twiddles_;  // exp(-2*pi*i*k/n), k < n/2
};

}  // namespace genreforge
