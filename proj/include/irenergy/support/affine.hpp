#pragma once

#include "irenergy/support/rational.hpp"

#include <map>
#include <optional>
#include <string>

namespace irenergy {

/// constant + Σ coeff·var over named size variables. Zero coefficients are
/// never stored.
struct Affine {
  Rational constant = 0;
  std::map<std::string, Rational> coeffs;

  static Affine of(Rational c);
  static Affine var(const std::string& name, Rational coeff = 1);

  bool is_constant() const { return coeffs.empty(); }
  Rational coeff(const std::string& v) const;
  bool mentions(const std::string& v) const { return coeffs.count(v) > 0; }

  Affine operator+(const Affine& o) const;
  Affine operator-(const Affine& o) const;
  Affine operator*(const Rational& k) const;
  Affine operator-() const { return *this * Rational(-1); }

  /// Simultaneous substitution; variables missing from `env` stay.
  Affine subst(const std::map<std::string, Affine>& env) const;
  /// Throws Error("arithmetic") on an unbound variable.
  Rational eval(const std::map<std::string, Rational>& env) const;

  std::string to_string() const;

  bool operator==(const Affine& o) const;
  bool operator!=(const Affine& o) const { return !(*this == o); }
  bool operator<(const Affine& o) const;
};

} // namespace irenergy
