#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <system_error>

namespace adhoclab {

/* Locale-free number formatting for CSV output. General format, 9 significant
 * digits, '.' decimal separator, byte-stable across platforms. */
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

inline std::string format_int(std::int64_t v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_uint(std::uint64_t v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace adhoclab
