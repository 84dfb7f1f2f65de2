#include "genreforge/errors.hpp"

namespace genreforge {

std::string_view errc_name(errc code) noexcept {
  switch (code) {
    case errc::malformed_container: return "MalformedContainer";
    case errc::unsupported_format: return "UnsupportedFormat";
    case errc::empty_audio: return "EmptyAudio";
    case errc::not_a_directory: return "NotADirectory";
    case errc::no_audio_found: return "NoAudioFound";
    case errc::too_short: return "TooShort";
    case errc::degenerate_filter: return "DegenerateFilter";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::class_too_small: return "ClassTooSmall";
    case errc::k_too_large: return "KTooLarge";
    case errc::single_class: return "SingleClass";
    case errc::non_finite_loss: return "NonFiniteLoss";
    case errc::empty_node: return "EmptyNode";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::empty_input: return "Empty";
    case errc::unsupported_version: return "UnsupportedVersion";
    case errc::corrupt_model_file: return "CorruptModelFile";
    case errc::io_error: return "IoError";
    case errc::bad_config: return "BadConfig";
  }
  return "UnknownError";
}

}  // namespace genreforge
