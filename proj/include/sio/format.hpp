#pragma once

#include <cstdio>
#include <string>

namespace sio {

// Fixed 17-significant-digit rendering used by every textual output.
inline std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace sio
