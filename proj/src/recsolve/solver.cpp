#include "irenergy/recsolve/solver.hpp"

#include "irenergy/support/error.hpp"

#include <algorithm>
#include <map>

namespace irenergy::recsolve {

namespace {

ClosedForm at(const ClosedForm& cf, const std::string& var, long n) {
  return cf.subst({{var, Affine::of(n)}});
}

// Recursive terms merged by shift: shift -> coefficient, zeros dropped.
std::map<long, Rational> merged_shifts(const Recurrence& r) {
  std::map<long, Rational> out;
  for (const auto& t : r.terms)
    out[t.shift.get_num().get_si()] += t.coeff;
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

// Base of the exponential on `var` in a term (1 if none); nullopt for fib/lucas.
std::optional<Rational> term_base(const Term& t, const std::string& var) {
  auto it = t.exps.find(var);
  if (it == t.exps.end())
    return Rational(1);
  if (it->second.kind != ExpFactor::Kind::Base)
    return std::nullopt;
  return it->second.base;
}

struct BasisFn {
  enum class Kind { Power, Fib, Lucas } kind = Kind::Power;
  Rational base = 1;
  unsigned degree = 0;

  Rational eval(long n) const {
    Rational v = irenergy::pow(Rational(n), static_cast<long>(degree));
    if (degree == 0)
      v = 1;
    switch (kind) {
    case Kind::Power:
      return v * irenergy::pow(base, n);
    case Kind::Fib:
      return v * Rational(fib_number(n));
    case Kind::Lucas:
      return v * Rational(lucas_number(n));
    }
    return v;
  }

  ClosedForm form(const std::string& var) const {
    ClosedForm mono(1);
    for (unsigned i = 0; i < degree; ++i)
      mono = mono * ClosedForm::var(var);
    switch (kind) {
    case Kind::Power:
      return mono * ClosedForm::power_of(base, var);
    case Kind::Fib:
      return mono * ClosedForm::fib(var);
    case Kind::Lucas:
      return mono * ClosedForm::lucas(var);
    }
    return mono;
  }
};

// Solves M c = v with rational M and closed-form right-hand side.
std::optional<std::vector<ClosedForm>> gauss(std::vector<std::vector<Rational>> m,
                                             std::vector<ClosedForm> v) {
  std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0)
      ++pivot;
    if (pivot == n)
      return std::nullopt;
    std::swap(m[pivot], m[col]);
    std::swap(v[pivot], v[col]);
    Rational inv = 1 / m[col][col];
    for (auto& x : m[col])
      x *= inv;
    v[col] = v[col] * ClosedForm(inv);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || m[row][col] == 0)
        continue;
      Rational factor = m[row][col];
      for (std::size_t k = col; k < n; ++k)
        m[row][k] -= factor * m[col][k];
      v[row] = v[row] - v[col] * ClosedForm(factor);
    }
  }
  return v;
}

} // namespace

std::string Recurrence::to_string() const {
  std::string rhs;
  ClosedForm rec;
  for (const auto& t : terms) {
    Affine arg = Affine::var(var, t.scale) - Affine::of(t.shift);
    rec += ClosedForm(t.coeff) * ClosedForm::opaque({name, {arg}});
  }
  ClosedForm all = rec + q;
  std::string out = name + "(" + var + ") = " + all.to_string();
  if (start > 0)
    out += "  for " + var + " >= " + std::to_string(start);
  for (std::size_t k = 0; k < initial.size(); ++k)
    out += "\n" + name + "(" + std::to_string(k) + ") = " + initial[k].to_string();
  return out;
}

Classification classify(const Recurrence& r) {
  Classification c;
  for (const auto& t : r.terms) {
    if (t.scale != 1) {
      c.reason = "argument scaled by " + format_exact(t.scale) + " is not a constant step";
      return c;
    }
    if (!is_integer(t.shift) || t.shift < 1) {
      c.reason = "shift " + format_exact(t.shift) + " is not a positive integer";
      return c;
    }
    if (t.shift > 2) {
      c.reason = "order " + format_exact(t.shift) + " exceeds 2";
      return c;
    }
  }
  for (const auto& t : r.q.terms()) {
    if (t.call) {
      for (const auto& a : t.call->args)
        if (a.mentions(r.var)) {
          c.reason = "inhomogeneous call " + t.call->to_string() + " depends on " + r.var;
          return c;
        }
    }
    if (!term_base(t, r.var)) {
      c.reason = "fib/lucas inhomogeneity is not supported";
      return c;
    }
  }
  if (r.start < 0 || static_cast<long>(r.initial.size()) != r.start) {
    c.reason = "expected " + std::to_string(r.start) + " initial values";
    return c;
  }
  auto shifts = merged_shifts(r);
  if (shifts.empty()) {
    c.tag = RecClass::Constant;
    return c;
  }
  long order = shifts.rbegin()->first;
  if (r.start < order) {
    c.reason = "recurrence reaches below 0";
    return c;
  }
  c.tag = RecClass::LinearConstantCoefficient;
  c.order = static_cast<int>(order);
  return c;
}

std::vector<ClosedForm> unroll(const Recurrence& r, long upto) {
  auto cls = classify(r);
  if (cls.tag == RecClass::Unsupported)
    throw Error("recsolve", "cannot unroll: " + cls.reason);
  auto shifts = merged_shifts(r);
  std::vector<ClosedForm> f;
  for (long n = 0; n <= upto; ++n) {
    if (n < r.start) {
      f.push_back(r.initial[static_cast<std::size_t>(n)]);
      continue;
    }
    ClosedForm v = at(r.q, r.var, n);
    for (const auto& [s, a] : shifts)
      v += ClosedForm(a) * f[static_cast<std::size_t>(n - s)];
    f.push_back(std::move(v));
  }
  return f;
}

SolveResult solve_recurrence(const Recurrence& r) {
  SolveResult res;
  auto cls = classify(r);
  if (cls.tag == RecClass::Unsupported) {
    res.reason = cls.reason;
    return res;
  }
  auto shifts = merged_shifts(r);
  long order = cls.tag == RecClass::Constant ? 0 : cls.order;
  Rational a1 = shifts.count(1) ? shifts[1] : Rational(0);
  Rational a2 = shifts.count(2) ? shifts[2] : Rational(0);

  // Characteristic roots with multiplicity; fib/lucas handled separately.
  std::map<Rational, unsigned> roots;
  bool golden = false;
  if (order == 1) {
    roots[a1] = 1;
  } else if (order == 2) {
    if (a1 == 1 && a2 == 1) {
      golden = true;
    } else {
      Rational disc = a1 * a1 + 4 * a2;
      Rational s;
      if (!exact_sqrt(disc, s)) {
        res.reason = "irrational characteristic roots of x^2 - " + format_exact(a1) +
                     "*x - " + format_exact(a2);
        return res;
      }
      Rational x1 = (a1 + s) / 2, x2 = (a1 - s) / 2;
      roots[x1] += 1;
      roots[x2] += 1;
    }
  }

  // Particular ansatz: per exponential base in q, its polynomial degree.
  std::map<Rational, unsigned> q_degree;
  for (const auto& t : r.q.terms()) {
    Rational b = *term_base(t, r.var);
    unsigned k = 0;
    if (auto it = t.powers.find(r.var); it != t.powers.end())
      k = it->second;
    auto [pos, inserted] = q_degree.emplace(b, k);
    if (!inserted)
      pos->second = std::max(pos->second, k);
  }

  std::vector<BasisFn> basis;
  if (golden) {
    basis.push_back({BasisFn::Kind::Fib, 1, 0});
    basis.push_back({BasisFn::Kind::Lucas, 1, 0});
  }
  std::map<Rational, unsigned> count;  // number of n^j terms per base
  for (const auto& [b, m] : roots)
    count[b] = std::max(count[b], m);
  for (const auto& [b, k] : q_degree) {
    unsigned m = roots.count(b) ? roots[b] : 0;
    count[b] = std::max(count[b], k + m + 1);
  }
  for (const auto& [b, n] : count)
    for (unsigned j = 0; j < n; ++j)
      basis.push_back({BasisFn::Kind::Power, b, j});

  long valid_from = r.start - order;
  std::size_t u = basis.size();
  auto values = unroll(r, valid_from + static_cast<long>(u));
  std::vector<std::vector<Rational>> m(u, std::vector<Rational>(u));
  std::vector<ClosedForm> rhs(u);
  for (std::size_t i = 0; i < u; ++i) {
    long n = valid_from + static_cast<long>(i);
    for (std::size_t j = 0; j < u; ++j)
      m[i][j] = basis[j].eval(n);
    rhs[i] = values[static_cast<std::size_t>(n)];
  }
  auto coeffs = gauss(std::move(m), std::move(rhs));
  if (!coeffs) {
    res.reason = "singular ansatz system";
    return res;
  }
  ClosedForm form;
  for (std::size_t j = 0; j < u; ++j)
    form += (*coeffs)[j] * basis[j].form(r.var);

  // The form often already matches earlier initial values.
  while (valid_from > 0 &&
         at(form, r.var, valid_from - 1) ==
             r.initial[static_cast<std::size_t>(valid_from - 1)])
    --valid_from;

  Solution sol{form, valid_from};
  auto verdict = verify_solution(sol, r);
  if (!verdict.ok) {
    res.reason = "solver output failed verification: " + verdict.detail;
    return res;
  }
  res.solution = std::move(sol);
  return res;
}

Verdict verify_solution(const Solution& s, const Recurrence& r, long upto) {
  Verdict v;
  auto cls = classify(r);
  if (cls.tag == RecClass::Unsupported) {
    v.detail = cls.reason;
    return v;
  }
  if (s.valid_from < 0 || s.valid_from > r.start) {
    v.detail = "validity threshold outside the base cases";
    return v;
  }
  auto shifts = merged_shifts(r);
  auto expected = unroll(r, upto);
  std::vector<ClosedForm> g;
  for (long n = 0; n <= upto; ++n) {
    ClosedForm value = n < s.valid_from ? r.initial[static_cast<std::size_t>(n)]
                                        : at(s.form, r.var, n);
    if (n < r.start) {
      if (value != r.initial[static_cast<std::size_t>(n)]) {
        v.detail = "base case fails at " + r.var + "=" + std::to_string(n) + ": " +
                   value.to_string() + " vs " +
                   r.initial[static_cast<std::size_t>(n)].to_string();
        return v;
      }
    } else {
      ClosedForm rhs = at(r.q, r.var, n);
      for (const auto& [sh, a] : shifts)
        rhs += ClosedForm(a) * g[static_cast<std::size_t>(n - sh)];
      if (value != rhs) {
        v.detail = "recurrence fails at " + r.var + "=" + std::to_string(n) + ": " +
                   value.to_string() + " vs " + rhs.to_string();
        return v;
      }
    }
    if (value != expected[static_cast<std::size_t>(n)]) {
      v.detail = "unrolled value differs at " + r.var + "=" + std::to_string(n);
      return v;
    }
    g.push_back(std::move(value));
  }
  v.ok = true;
  return v;
}

Verdict verify_solution(const ClosedForm& cf, const Recurrence& r, long upto) {
  return verify_solution(Solution{cf, 0}, r, upto);
}

} // namespace irenergy::recsolve
