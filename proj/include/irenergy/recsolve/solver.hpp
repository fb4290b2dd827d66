#pragma once

#include "irenergy/recsolve/closed_form.hpp"

#include <optional>
#include <string>
#include <vector>

namespace irenergy::recsolve {

/// coeff * f(scale*n - shift)
struct RecursiveTerm {
  Rational coeff = 1;
  Rational scale = 1;
  Rational shift = 1;
};

/// f(n) = Σ terms + q(n) for n >= start; f(k) = initial[k] for k < start.
/// q and the initial values may mention other variables (held constant) and
/// opaque calls that do not depend on `var`.
struct Recurrence {
  std::string name = "f";
  std::string var = "n";
  std::vector<RecursiveTerm> terms;
  ClosedForm q;
  long start = 0;
  std::vector<ClosedForm> initial;

  std::string to_string() const;
};

enum class RecClass { Constant, LinearConstantCoefficient, Unsupported };

struct Classification {
  RecClass tag = RecClass::Unsupported;
  int order = 0;
  std::string reason;
};

Classification classify(const Recurrence& r);

/// `form` equals f(n) for every n >= valid_from; below that the initial
/// values apply.
struct Solution {
  ClosedForm form;
  long valid_from = 0;
};

struct SolveResult {
  std::optional<Solution> solution;
  std::string reason;  // set when unsolved
};

SolveResult solve_recurrence(const Recurrence& r);

struct Verdict {
  bool ok = false;
  std::string detail;
};

/// Checks the base cases and the recurrence at every n up to `upto`, and
/// compares against direct unrolling.
Verdict verify_solution(const Solution& s, const Recurrence& r, long upto = 30);
Verdict verify_solution(const ClosedForm& cf, const Recurrence& r, long upto = 30);

/// f(0..upto) by direct unrolling. Throws Error("recsolve") if the
/// recurrence is not constant-step.
std::vector<ClosedForm> unroll(const Recurrence& r, long upto);

} // namespace irenergy::recsolve
