#include "irenergy/support/rational.hpp"

#include "irenergy/support/error.hpp"

#include <cctype>

namespace irenergy {

namespace {

[[noreturn]] void bad_number(std::string_view text) {
  throw Error("number", "malformed number '" + std::string(text) + "'");
}

bool all_digits(std::string_view s) {
  if (s.empty())
    return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return false;
  return true;
}

} // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty())
    bad_number(text);

  Rational result;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      bad_number(text);
    Integer d(std::string(den), 10);
    if (d == 0)
      bad_number(text);
    result = Rational(Integer(std::string(num), 10), d);
    result.canonicalize();
  } else {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      auto exp_text = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (!all_digits(exp_text) || exp_text.size() > 6)
        bad_number(text);
      exponent = std::stol(std::string(exp_text));
      if (exp_negative)
        exponent = -exponent;
      s = s.substr(0, e);
    }
    std::string_view int_part = s;
    std::string_view frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      int_part = s.substr(0, dot);
      frac_part = s.substr(dot + 1);
      if (!frac_part.empty() && !all_digits(frac_part))
        bad_number(text);
    }
    if (int_part.empty() && frac_part.empty())
      bad_number(text);
    if (!int_part.empty() && !all_digits(int_part))
      bad_number(text);
    std::string digits = std::string(int_part) + std::string(frac_part);
    Integer mantissa(digits.empty() ? std::string("0") : digits, 10);
    result = Rational(mantissa);
    result *= pow(Rational(10), exponent - static_cast<long>(frac_part.size()));
  }
  if (negative)
    result = -result;
  return result;
}

bool is_integer(const Rational& value) { return value.get_den() == 1; }

bool has_finite_decimal(const Rational& value) {
  Integer den = value.get_den();
  while (den % 2 == 0)
    den /= 2;
  while (den % 5 == 0)
    den /= 5;
  return den == 1;
}

std::string format_exact(const Rational& value) {
  if (is_integer(value))
    return value.get_num().get_str();
  if (!has_finite_decimal(value))
    return value.get_num().get_str() + "/" + value.get_den().get_str();
  // Find the number of fractional digits needed.
  int digits = 0;
  Rational scaled = value;
  while (!is_integer(scaled)) {
    scaled *= 10;
    ++digits;
  }
  return format_fixed(value, digits);
}

Integer round_half_away(const Rational& value) {
  Integer num = abs(value.get_num());
  Integer den = value.get_den();
  Integer q = (2 * num + den) / (2 * den);
  return value < 0 ? Integer(-q) : q;
}

std::string format_fixed(const Rational& value, int digits) {
  Integer scale = 1;
  for (int i = 0; i < digits; ++i)
    scale *= 10;
  Integer scaled = round_half_away(value * Rational(scale));
  bool negative = scaled < 0;
  Integer magnitude = abs(scaled);
  std::string body = magnitude.get_str();
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits))
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  return (negative ? "-" : "") + body;
}

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0)
      throw Error("arithmetic", "zero raised to a negative power");
    Rational inv = 1 / base;
    return pow(inv, -exponent);
  }
  Rational result = 1;
  Rational b = base;
  unsigned long e = static_cast<unsigned long>(exponent);
  while (e) {
    if (e & 1)
      result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

bool exact_sqrt(const Rational& value, Rational& root) {
  if (value < 0)
    return false;
  Integer n = value.get_num();
  Integer d = value.get_den();
  Integer rn = sqrt(n);
  Integer rd = sqrt(d);
  if (rn * rn != n || rd * rd != d)
    return false;
  root = Rational(rn, rd);
  root.canonicalize();
  return true;
}

double to_double(const Rational& value) { return value.get_d(); }

} // namespace irenergy
