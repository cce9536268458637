#pragma once

#include <charconv>
#include <string>

namespace smax {

// Shortest round-trip decimal form; '.' separator regardless of locale.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace smax
