#pragma once

#include <string_view>

#include "abmap/quad.hpp"

namespace abmap {

/// Parses an exact real: decimals ("2.6", "1e-3"), ratios ("13/5"),
/// arithmetic with + - * / ^ and parentheses, sqrt(q) for rational q, and
/// root(a,b,c) = the largest real root of a x^2 + b x + c.
/// Throws Error(ParseError) or Error(FieldMismatch).
Quad parse_real(std::string_view text);

}  // namespace abmap
