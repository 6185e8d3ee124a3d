#include "beadforge/io.hpp"

#include <cstdio>
#include <fstream>

#include "beadforge/errors.hpp"

namespace beadforge {

std::string fmt_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ResourceError("cannot open output file: " + path);
  f << content;
  if (!f) throw ResourceError("write failed: " + path);
}

}  // namespace beadforge
