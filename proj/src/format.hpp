#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace nlsb {

/// 17 significant digits; the form used in every CSV/JSON artifact.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Shortest text that parses back to the same double.
inline std::string format_shortest(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return format_double(v);
  return std::string(buf, ptr);
}

}  // namespace nlsb
