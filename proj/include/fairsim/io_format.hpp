#pragma once

#include <cstdio>
#include <string>

namespace fairsim {

/// Floats in CSV/SVG output go through one formatter (9 significant digits)
/// so identical results always serialize to identical bytes.
inline std::string format_g9(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return std::string(buf);
}

inline std::string format_g6(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return std::string(buf);
}

}  // namespace fairsim
