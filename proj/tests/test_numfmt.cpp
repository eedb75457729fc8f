#include "lrom/numfmt.hpp"

#include "lrom/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace lrom;

TEST_CASE("format-parse round trip is exact") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
  std::uniform_int_distribution<int> exponent(-300, 300);
  for (int trial = 0; trial < 1000; ++trial) {
    const double value = std::ldexp(mantissa(rng), exponent(rng));
    CHECK(numfmt::parse_double(numfmt::format_double(value)) == value);
  }
  CHECK(numfmt::parse_double(numfmt::format_double(0.1 + 0.2)) == 0.1 + 0.2);
  CHECK(numfmt::format_double(1.0) == "1");
  CHECK(numfmt::format_double(0.5) == "0.5");
}

TEST_CASE("strict parsing") {
  CHECK(numfmt::parse_double("-1.5e-3") == -1.5e-3);
  CHECK_THROWS_AS(numfmt::parse_double(""), FormatError);
  CHECK_THROWS_AS(numfmt::parse_double("1.5x"), FormatError);
  CHECK(numfmt::parse_integer("-42") == -42);
  CHECK_THROWS_AS(numfmt::parse_integer("4.2"), FormatError);
  CHECK_THROWS_AS(numfmt::parse_integer("zzz"), FormatError);
}
