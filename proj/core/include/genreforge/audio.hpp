#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace genreforge {

// Decoded mono audio. Samples are normalized to [-1, 1) and immutable by
// convention once decoded; share freely across threads.
struct AudioClip {
  std::vector<double> samples;
  int sample_rate_hz = 0;
  std::string source_path;

  double duration_s() const {
    return sample_rate_hz > 0
               ? static_cast<double>(samples.size()) / sample_rate_hz
               : 0.0;
  }
};

struct DatasetEntry {
  std::filesystem::path file_path;
  std::string genre_label;
};

// Enumeration of a <root>/<genre>/<track>.wav layout. `genres` is sorted
// lexicographically so the label -> index mapping is deterministic.
struct DatasetManifest {
  std::vector<DatasetEntry> entries;
  std::vector<std::string> genres;
};

// Decodes a RIFF/WAVE container holding 16-bit PCM (format code 1), mono or
// stereo. Stereo is downmixed by per-frame channel mean; samples are scaled
// by 1/32768. Chunks other than fmt/data are skipped.
//
// Throws Error with errc::malformed_container, errc::unsupported_format or
// errc::empty_audio.
AudioClip decode_wav(std::span<const std::uint8_t> bytes);

// Reads the file into memory and decodes it. Adds errc::io_error for
// unreadable paths.
AudioClip decode_wav_file(const std::filesystem::path& path);

// Walks the immediate subdirectories of `root` (one per genre) and lists
// every .wav file. Entries are sorted by path, so the manifest is a pure
// function of directory content.
//
// Throws errc::not_a_directory, errc::no_audio_found.
DatasetManifest scan_dataset(const std::filesystem::path& root);

// First floor(duration_s * sample_rate) samples; clips shorter than the
// requested duration pass through unchanged (no padding).
AudioClip take_segment(const AudioClip& clip, double duration_s);

}  // namespace genreforge
