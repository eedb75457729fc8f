#pragma once

#include <string>
#include <string_view>

namespace lrom::numfmt {

// Shortest decimal representation that parses back to the identical double.
// All text formats in the toolkit (times files, COO operators, CSV output)
// use this so that write/read round trips are exact.
std::string format_double(double value);

// Strict parse; throws FormatError on trailing garbage or empty input.
double parse_double(std::string_view text);

long long parse_integer(std::string_view text);

} // namespace lrom::numfmt
