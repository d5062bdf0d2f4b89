#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace vchoq {

inline constexpr int kSignificantDigits = 9;

// Fixed 9-significant-digit text for CSV cells and witness strings.
inline std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// v rounded to 9 significant digits, so a shortest-round-trip JSON writer
// prints at most that many.
inline double round9(double v) { return std::strtod(fmt9(v).c_str(), nullptr); }

}  // namespace vchoq
