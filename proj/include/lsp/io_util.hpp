#pragma once
// Locale-independent numeric formatting shared by every writer, so repeated
// runs with the same seed emit byte-identical files.

#include <cstdio>
#include <string>

namespace lsp {

// Shortest text that round-trips a double exactly.
inline std::string format_double(double value) {
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == value) break;
  }
  return buf;
}

}  // namespace lsp
