//===-- closed_form.hpp - Exact closed-form cost functions ---------------===//
//
// A ClosedForm is a canonical sum of terms
//   coeff * Π v^k * Π exp_v(v) [* opaque call]
// where exp_v is b^v, fib(v) or lucas(v). Opaque calls stand for the cost of a
// predicate that is still being solved and never survive into reports.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "irenergy/support/affine.hpp"
#include "irenergy/support/rational.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace irenergy::recsolve {

struct ExpFactor {
  enum class Kind { Fib, Lucas, Base };
  Kind kind = Kind::Base;
  Rational base = 1;  // Base only; never 0 or 1

  bool operator==(const ExpFactor& o) const;
  bool operator<(const ExpFactor& o) const;
};

struct OpaqueCall {
  std::string pred;
  std::vector<Affine> args;

  bool operator==(const OpaqueCall& o) const;
  bool operator<(const OpaqueCall& o) const;
  std::string to_string() const;
};

struct Term {
  Rational coeff = 0;
  std::map<std::string, unsigned> powers;
  std::map<std::string, ExpFactor> exps;
  std::optional<OpaqueCall> call;

  /// True when everything but the coefficient matches.
  bool same_key(const Term& o) const;
  unsigned degree() const;
};

class ClosedForm {
public:
  ClosedForm() = default;
  ClosedForm(Rational c);  // NOLINT: implicit by design
  ClosedForm(int c) : ClosedForm(Rational(c)) {}  // NOLINT

  static ClosedForm var(const std::string& name);
  static ClosedForm from_affine(const Affine& a);
  static ClosedForm power_of(Rational base, const std::string& var);
  static ClosedForm fib(const std::string& var);
  static ClosedForm lucas(const std::string& var);
  static ClosedForm opaque(OpaqueCall call);
  /// Builds a canonical form from arbitrary terms.
  static ClosedForm from_terms(std::vector<Term> terms);
  /// Keeps the terms verbatim, for exercising canonicalize().
  static ClosedForm raw(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant value, or nullopt if any variable or call appears.
  std::optional<Rational> constant_value() const;
  std::optional<Affine> as_affine() const;

  std::set<std::string> variables() const;
  bool mentions(const std::string& var) const;
  bool has_opaque() const;
  std::vector<OpaqueCall> opaque_calls() const;

  ClosedForm operator+(const ClosedForm& o) const;
  ClosedForm operator-(const ClosedForm& o) const;
  ClosedForm operator*(const ClosedForm& o) const;
  ClosedForm operator-() const;
  ClosedForm& operator+=(const ClosedForm& o) { return *this = *this + o; }
  ClosedForm& operator-=(const ClosedForm& o) { return *this = *this - o; }

  /// Simultaneous substitution of affine expressions for variables, also
  /// applied inside opaque call arguments. Throws Error("closed-form") when an
  /// exponential would stop being a plain b^v / fib(v) / lucas(v).
  ClosedForm subst(const std::map<std::string, Affine>& env) const;

  /// Replaces opaque calls using `resolve`, which returns the closed form of
  /// a call (or nullopt to keep it).
  template <typename F> ClosedForm resolve_calls(F&& resolve) const;

  /// Exact value. Throws Error("closed-form") on unbound variables, opaque
  /// calls or non-integer exponents.
  Rational evaluate(const std::map<std::string, Rational>& env) const;

  std::string to_string() const;

  bool operator==(const ClosedForm& o) const;
  bool operator!=(const ClosedForm& o) const { return !(*this == o); }
  bool operator<(const ClosedForm& o) const;

private:
  std::vector<Term> terms_;
  void normalize();
};

ClosedForm canonicalize(const ClosedForm& cf);

/// Parses the printed grammar: sums and products of numbers, variables,
/// `b^V`, `V^k`, `fib(V)`, `lucas(V)`, parentheses, and `name(args)` calls.
/// Throws Error("closed-form") with the column on malformed input.
ClosedForm parse_closed_form(std::string_view text);

Integer fib_number(long n);
Integer lucas_number(long n);

template <typename F> ClosedForm ClosedForm::resolve_calls(F&& resolve) const {
  ClosedForm out;
  for (const auto& t : terms_) {
    Term rest = t;
    rest.call.reset();
    ClosedForm scaled = from_terms({rest});
    if (t.call) {
      std::optional<ClosedForm> r = resolve(*t.call);
      out += r ? scaled * *r : from_terms({t});
    } else {
      out += scaled;
    }
  }
  return out;
}

} // namespace irenergy::recsolve
