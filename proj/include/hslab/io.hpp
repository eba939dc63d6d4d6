#pragma once

#include <string>
#include <vector>

namespace hslab {

// 17 significant digits, round-trip exact for doubles.
std::string fmt17(double x);

std::vector<std::string> split_lines(const std::string& text);
std::vector<std::string> split_csv_row(const std::string& line);

} // namespace hslab
