#pragma once

#include <string>

namespace beadforge {

// 12 significant digits, '.' separator, locale independent.
std::string fmt_num(double x);

// Writes to `path`, or stdout when path is empty or "-".
void write_output(const std::string& path, const std::string& content);

}  // namespace beadforge
