#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace qsp {

/// Exact arbitrary-precision rational, always kept in lowest terms.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "3", "-3", "7/10" or a decimal such as "0.7" / "-1.25" exactly.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical rendering: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

/// Decimal rendering rounded half-up to at most `digits` fraction digits,
/// trailing zeros stripped ("37.3342", "0.99", "33").
std::string to_decimal(const Rational& value, int digits = 10);

inline bool is_probability(const Rational& value) { return value >= 0 && value <= 1; }

}  // namespace qsp
