// Exact rational arithmetic helpers shared by every stage of the analyzer.
#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace irenergy {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "12", "-3.5", "1/3", "4.7e4" or "1.2E-3" exactly. Throws Error on
/// malformed text.
Rational parse_rational(std::string_view text);

/// Exact rendering: integers as-is, finite decimals without trailing zeros
/// ("29.9"), anything else as "p/q".
std::string format_exact(const Rational& value);

/// Decimal rendering rounded half away from zero to `digits` fractional digits.
std::string format_fixed(const Rational& value, int digits);

/// Rounds half away from zero to the nearest integer.
Integer round_half_away(const Rational& value);

bool is_integer(const Rational& value);

/// True when the denominator has no prime factors other than 2 and 5.
bool has_finite_decimal(const Rational& value);

/// Integer power; negative exponents invert. Zero to a negative power throws.
Rational pow(const Rational& base, long exponent);

/// Exact square root if `value` is the square of a rational.
bool exact_sqrt(const Rational& value, Rational& root);

double to_double(const Rational& value);

} // namespace irenergy
