#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace genreforge {

// Every failure the library can report, one code per contract violation.
enum class errc {
  malformed_container,
  unsupported_format,
  empty_audio,
  not_a_directory,
  no_audio_found,
  too_short,
  degenerate_filter,
  dimension_mismatch,
  class_too_small,
  k_too_large,
  single_class,
  non_finite_loss,
  empty_node,
  length_mismatch,
  index_out_of_range,
  empty_input,
  unsupported_version,
  corrupt_model_file,
  io_error,
  bad_config,
};

std::string_view errc_name(errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace genreforge
