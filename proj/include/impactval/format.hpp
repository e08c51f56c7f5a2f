#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

namespace impactval {

/// Shortest decimal that round-trips to the same double. Infinities and NaN
/// become "inf", "-inf" and "nan".
inline std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

/// printf-style rendering for human-facing text.
inline std::string format_fixed(double value, int decimals) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

/// 0.0632 -> "6.32%".
inline std::string format_percent(double fraction, int decimals = 2) {
  return format_fixed(100.0 * fraction, decimals) + "%";
}

}  // namespace impactval
