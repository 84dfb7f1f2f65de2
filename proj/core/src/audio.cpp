#include "genreforge/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "genreforge/errors.hpp"

namespace genreforge {

namespace {

constexpr std::uint16_t kFormatPcm = 1;

std::uint16_t read_u16(std::span<const std::uint8_t> bytes, std::size_t at) {
  return static_cast<std::uint16_t>(bytes[at] | (bytes[at + 1] << 8));
}

std::uint32_t read_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  return static_cast<std::uint32_t>(bytes[at]) |
         (static_cast<std::uint32_t>(bytes[at + 1]) << 8) |
         (static_cast<std::uint32_t>(bytes[at + 2]) << 16) |
         (static_cast<std::uint32_t>(bytes[at + 3]) << 24);
}

bool fourcc_is(std::span<const std::uint8_t> bytes, std::size_t at,
               const char* tag) {
  return std::memcmp(bytes.data() + at, tag, 4) == 0;
}

struct FmtChunk {
  std::uint16_t format_tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
};

}  // namespace

AudioClip decode_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !fourcc_is(bytes, 0, "RIFF") ||
      !fourcc_is(bytes, 8, "WAVE")) {
    throw Error(errc::malformed_container, "not a RIFF/WAVE file");
  }

  FmtChunk fmt;
  bool have_fmt = false;
  std::size_t data_offset = 0;
  std::size_t data_size = 0;
  bool have_data = false;

  // Walk the chunk list; fmt and data are mandatory, anything else is
  // skipped. RIFF chunks are word-aligned.
  std::size_t at = 12;
  while (at + 8 <= bytes.size()) {
    const std::uint32_t chunk_size = read_u32(bytes, at + 4);
    const std::size_t body = at + 8;
    if (body + chunk_size > bytes.size()) {
      throw Error(errc::malformed_container, "truncated chunk");
    }
    if (fourcc_is(bytes, at, "fmt ")) {
      if (chunk_size < 16) {
        throw Error(errc::malformed_container, "fmt chunk too small");
      }
      fmt.format_tag = read_u16(bytes, body + 0);
      fmt.channels = read_u16(bytes, body + 2);
      fmt.sample_rate = read_u32(bytes, body + 4);
      fmt.bits_per_sample = read_u16(bytes, body + 14);
      have_fmt = true;
    } else if (fourcc_is(bytes, at, "data")) {
      data_offset = body;
      data_size = chunk_size;
      have_data = true;
    }
    at = body + chunk_size + (chunk_size & 1);
  }

  if (!have_fmt) {
    throw Error(errc::malformed_container, "missing fmt chunk");
  }
  if (!have_data) {
    throw Error(errc::malformed_container, "missing data chunk");
  }
  if (fmt.format_tag != kFormatPcm) {
    throw Error(errc::unsupported_format,
                "format code " + std::to_string(fmt.format_tag) +
                    " (only PCM is supported)");
  }
  if (fmt.bits_per_sample != 16) {
    throw Error(errc::unsupported_format,
                "bit depth " + std::to_string(fmt.bits_per_sample) +
                    " (only 16-bit is supported)");
  }
  if (fmt.channels == 0 || fmt.sample_rate == 0) {
    throw Error(errc::malformed_container, "invalid fmt fields");
  }
  if (fmt.channels > 2) {
    throw Error(errc::unsupported_format,
                std::to_string(fmt.channels) + " channels (mono/stereo only)");
  }

  const std::size_t bytes_per_frame = 2u * fmt.channels;
  const std::size_t num_frames = data_size / bytes_per_frame;
  if (num_frames == 0) {
    throw Error(errc::empty_audio, "data chunk holds no samples");
  }

  AudioClip clip;
  clip.sample_rate_hz = static_cast<int>(fmt.sample_rate);
  clip.samples.resize(num_frames);

  constexpr double kScale = 1.0 / 32768.0;
  if (fmt.channels == 1) {
    for (std::size_t i = 0; i < num_frames; ++i) {
      const auto s = static_cast<std::int16_t>(read_u16(bytes, data_offset + 2 * i));
      clip.samples[i] = s * kScale;
    }
  } else {
    for (std::size_t i = 0; i < num_frames; ++i) {
      const std::size_t frame_at = data_offset + 4 * i;
      const auto l = static_cast<std::int16_t>(read_u16(bytes, frame_at));
      const auto r = static_cast<std::int16_t>(read_u16(bytes, frame_at + 2));
      clip.samples[i] = 0.5 * (l + r) * kScale;
    }
  }
  return clip;
}

AudioClip decode_wav_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(errc::io_error, "cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes(
      (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  AudioClip clip = decode_wav(bytes);
  clip.source_path = path.string();
  return clip;
}

DatasetManifest scan_dataset(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(errc::not_a_directory, root.string());
  }

  auto is_wav = [](const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".wav";
  };

  DatasetManifest manifest;
  for (const auto& genre_dir : fs::directory_iterator(root)) {
    if (!genre_dir.is_directory()) continue;
    const std::string genre = genre_dir.path().filename().string();
    manifest.genres.push_back(genre);
    for (const auto& file : fs::directory_iterator(genre_dir.path())) {
      if (file.is_regular_file() && is_wav(file.path())) {
        manifest.entries.push_back({file.path(), genre});
      }
    }
  }

  std::sort(manifest.genres.begin(), manifest.genres.end());
  std::sort(manifest.entries.begin(), manifest.entries.end(),
            [](const DatasetEntry& a, const DatasetEntry& b) {
              return a.file_path.string() < b.file_path.string();
            });

  if (manifest.entries.empty()) {
    throw Error(errc::no_audio_found,
                "no .wav files under " + root.string());
  }
  return manifest;
}

AudioClip take_segment(const AudioClip& clip, double duration_s) {
  if (!(duration_s > 0.0)) {
    throw std::invalid_argument("take_segment: duration must be positive");
  }
  const auto want = static_cast<std::size_t>(
      std::floor(duration_s * clip.sample_rate_hz));
  if (clip.samples.size() <= want) {
    return clip;
  }
  AudioClip out;
  out.sample_rate_hz = clip.sample_rate_hz;
  out.source_path = clip.source_path;
  out.samples.assign(clip.samples.begin(), clip.samples.begin() + want);
  return out;
}

}  // namespace genreforge
