#pragma once

#include <cstdio>
#include <string>

namespace gfl {

/// Fixed-point with `decimals` places, trailing zeros (and a trailing dot)
/// stripped: 1e-6 -> "0.000001", 132.5 -> "132.5", 0.0 -> "0".
inline std::string format_trimmed(double v, int decimals = 9) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  if (s.find('.') != std::string::npos) {
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

/// Plain fixed-point, e.g. format_fixed(120.0, 6) -> "120.000000".
inline std::string format_fixed(double v, int decimals = 6) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

} // namespace gfl
