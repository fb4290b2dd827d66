#include "generators.hpp"

namespace irenergy::testing {

using recsolve::ClosedForm;
using recsolve::ExpFactor;
using recsolve::Recurrence;
using recsolve::RecursiveTerm;
using recsolve::Term;

std::vector<Term> random_terms(Rng& rng, const std::vector<std::string>& vars) {
  static const std::vector<Rational> bases = {2, 3, -1, Rational(1, 2), Rational(3, 2)};
  std::vector<Term> terms;
  long n = rng.int_in(1, 5);
  for (long i = 0; i < n; ++i) {
    Term t;
    t.coeff = rng.rational(60, 20);
    for (const auto& v : vars)
      if (rng.coin(0.4))
        t.powers[v] = static_cast<unsigned>(rng.int_in(1, 2));
    if (rng.coin(0.3)) {
      const auto& v = rng.pick(vars);
      switch (rng.int_in(0, 2)) {
      case 0:
        t.exps[v] = {ExpFactor::Kind::Base, rng.pick(bases)};
        break;
      case 1:
        t.exps[v] = {ExpFactor::Kind::Fib, 1};
        break;
      default:
        t.exps[v] = {ExpFactor::Kind::Lucas, 1};
        break;
      }
    }
    terms.push_back(std::move(t));
    // Occasionally duplicate a key so canonicalization has merging to do.
    if (rng.coin(0.2)) {
      Term dup = terms.back();
      dup.coeff = rng.rational(10, 3);
      terms.push_back(std::move(dup));
    }
  }
  return terms;
}

Recurrence random_recurrence(Rng& rng) {
  static const std::vector<Rational> roots = {1, 2, 3, -1, Rational(1, 2), -2};
  Recurrence r;
  r.var = "n";
  long order = rng.int_in(1, 2);
  bool golden = order == 2 && rng.coin(0.4);
  if (order == 1) {
    r.terms.push_back({rng.pick(roots), 1, 1});
  } else if (golden) {
    r.terms.push_back({1, 1, 1});
    r.terms.push_back({1, 1, 2});
  } else {
    Rational x1 = rng.pick(roots), x2 = rng.pick(roots);
    // (x - x1)(x - x2) = x^2 - (x1 + x2) x + x1 x2
    if (x1 + x2 != 0)
      r.terms.push_back({x1 + x2, 1, 1});
    r.terms.push_back({-(x1 * x2), 1, 2});
  }
  ClosedForm q = rng.rational(20, 4);
  if (rng.coin(0.5))
    q += ClosedForm(rng.rational(5, 2)) * ClosedForm::var("n");
  if (rng.coin(0.2))
    q += ClosedForm(rng.rational(3, 1)) * ClosedForm::var("n") * ClosedForm::var("n");
  if (rng.coin(0.2))
    q += ClosedForm(rng.rational(3, 1)) * ClosedForm::power_of(rng.pick(roots), "n");
  if (rng.coin(0.3))
    q += ClosedForm(rng.rational(3, 1)) * ClosedForm::var("M");
  r.q = q;
  r.start = order + rng.int_in(0, 2);
  for (long k = 0; k < r.start; ++k) {
    ClosedForm init = rng.rational(30, 2);
    if (rng.coin(0.2))
      init += ClosedForm::var("M");
    r.initial.push_back(init);
  }
  return r;
}

} // namespace irenergy::testing
