#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace qpmut {

using Rational = mpq_class;

/// Parses "p/q", "p" or "-p/q", ignoring surrounding whitespace. Throws Error(Parse) on a zero denominator or
/// malformed input. The result is canonicalized.
Rational parse_rational(std::string_view text);

/// Normalized fraction string: "3", "-1/2".
std::string to_string(const Rational& q);

}  // namespace qpmut
