#pragma once

#include <concepts>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace genreforge::detail {

// Minimal JSON emitter. Doubles are printed with 17 significant digits so
// binary64 values survive a write/parse round-trip bit-exactly.
class JsonWriter {
 public:
  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(std::string_view name) {
    separate();
    append_string(name);
    out_ += ':';
    pending_value_ = true;
  }

  void value(double v) {
    separate();
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out_ += buf;
  }
  template <typename T>
    requires std::integral<T> && (!std::same_as<T, bool>)
  void value(T v) {
    separate();
    out_ += std::to_string(v);
  }
  void value(bool v) {
    separate();
    out_ += v ? "true" : "false";
  }
  void value(std::string_view s) {
    separate();
    append_string(s);
  }
  void value(const char* s) { value(std::string_view(s)); }

  const std::string& str() const { return out_; }
  std::string take() { return std::move(out_); }

 private:
  void open(char c) {
    separate();
    out_ += c;
    need_comma_.push_back(false);
  }
  void close(char c) {
    out_ += c;
    need_comma_.pop_back();
    if (!need_comma_.empty()) need_comma_.back() = true;
  }
  void separate() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!need_comma_.empty()) {
      if (need_comma_.back()) out_ += ',';
      need_comma_.back() = true;
    }
  }
  void append_string(std::string_view s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\r': out_ += "\\r"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> need_comma_;
  bool pending_value_ = false;
};

}  // namespace genreforge::detail
