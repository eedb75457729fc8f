#include "lrom/numfmt.hpp"

#include "lrom/errors.hpp"

#include <charconv>
#include <system_error>

namespace lrom::numfmt {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw NumericalError("failed to format double");
  }
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw FormatError("not a floating-point number: '" + std::string(text) +
                      "'");
  }
  return value;
}

long long parse_integer(std::string_view text) {
  long long value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw FormatError("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

} // namespace lrom::numfmt
