#pragma once

#include <optional>
#include <string>

namespace pedal {

/// Canonical decimal form of a numeric string: no leading '+', no leading
/// zeros on the integer part, no trailing fractional zeros, no bare trailing
/// '.', "-0" collapses to "0". Returns nullopt if `text` is not a plain
/// decimal number (scientific notation is rejected).
std::optional<std::string> canonical_decimal(const std::string& text);

}  // namespace pedal
