#include <cstdio>
#include <cstdlib>
#include <string>

#include "doctest.h"
#include "pedal/numeric.hpp"

using pedal::canonical_decimal;

namespace {

// Independent formatting oracle: parse with strtod and print with enough
// precision, then trim. Only valid for values %.10g round-trips exactly,
// which covers every short decimal used here.
std::string oracle_canonical(const std::string& text) {
  double value = std::strtod(text.c_str(), nullptr);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10f", value);
  std::string s(buf);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

}  // namespace

TEST_CASE("canonical_decimal strips trailing fractional zeros") {
  CHECK(canonical_decimal("3.50") == "3.5");
  CHECK(canonical_decimal("42.0") == "42");
  CHECK(canonical_decimal("0.250") == "0.25");
  CHECK(canonical_decimal("100") == "100");
}

TEST_CASE("canonical_decimal normalizes signs and leading zeros") {
  CHECK(canonical_decimal("+7") == "7");
  CHECK(canonical_decimal("-0.0") == "0");
  CHECK(canonical_decimal("-12.30") == "-12.3");
  CHECK(canonical_decimal("007") == "7");
  CHECK(canonical_decimal(".5") == "0.5");
  CHECK(canonical_decimal("  8 ") == "8");
}

TEST_CASE("canonical_decimal rejects non-decimals") {
  CHECK(!canonical_decimal("abc"));
  CHECK(!canonical_decimal(""));
  CHECK(!canonical_decimal("1e3"));
  CHECK(!canonical_decimal("1.2.3"));
  CHECK(!canonical_decimal("-"));
}

TEST_CASE("canonical_decimal agrees with formatting oracle") {
  const char* cases[] = {"3.50", "42.0", "0.250",  "100", "-12.30", "7",
                         "0.5",  "-0",   "1234.5", "0.1", "99.90",  "8.000"};
  for (const char* c : cases) {
    CAPTURE(c);
    CHECK(canonical_decimal(c) == oracle_canonical(c));
  }
}

TEST_CASE("canonicalization is idempotent") {
  const char* cases[] = {"3.50", "-0.10", "042", "7.", "0.000"};
  for (const char* c : cases) {
    auto once = canonical_decimal(c);
    if (!once) continue;
    CHECK(canonical_decimal(*once) == *once);
  }
}
