#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace conntraj {

// Locale-independent fixed-point formatting used by every CSV/SVG writer so
// that outputs are byte-stable.
inline std::string format_fixed(double value, int digits) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

// Shortest "%g"-style rendering, for configuration echoes.
inline std::string format_general(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

// Fixed formatting with infinity rendered as an empty cell.
inline std::string format_cell(double value, int digits) {
  return std::isfinite(value) ? format_fixed(value, digits) : std::string();
}

}  // namespace conntraj
