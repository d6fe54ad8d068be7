#pragma once

#include <cstdio>
#include <string>

namespace atr {

// 17 significant digits: lossless double round trip in text form.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

inline std::string format_double_compact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace atr
