#include "pedal/numeric.hpp"

#include <cctype>
#include <cstddef>

namespace pedal {

std::optional<std::string> canonical_decimal(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  if (begin == end) return std::nullopt;

  bool negative = false;
  std::size_t pos = begin;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }

  std::string int_part;
  std::string frac_part;
  bool seen_dot = false;
  for (; pos < end; ++pos) {
    char c = text[pos];
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      (seen_dot ? frac_part : int_part).push_back(c);
    } else {
      return std::nullopt;
    }
  }
  if (int_part.empty() && frac_part.empty()) return std::nullopt;

  while (!frac_part.empty() && frac_part.back() == '0') frac_part.pop_back();
  std::size_t nz = 0;
  while (nz + 1 < int_part.size() && int_part[nz] == '0') ++nz;
  int_part.erase(0, nz);
  if (int_part.empty()) int_part = "0";

  std::string out = int_part;
  if (!frac_part.empty()) {
    out += '.';
    out += frac_part;
  }
  if (negative && out != "0") out.insert(out.begin(), '-');
  return out;
}

}  // namespace pedal
