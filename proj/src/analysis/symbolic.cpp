#include "irenergy/analysis/symbolic.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

namespace irenergy::analysis {

using recsolve::ClosedForm;

namespace {

// Splits d into its variable part and the constant moved to the right.
std::pair<std::string, std::string> sides(const Affine& d) {
  Affine vars = d - Affine::of(d.constant);
  return {vars.to_string(), format_exact(-d.constant)};
}

bool integral(const Affine& a) {
  if (!is_integer(a.constant))
    return false;
  for (const auto& [v, k] : a.coeffs)
    if (!is_integer(k))
      return false;
  return true;
}

Condition normalized(Atom::Kind kind, Affine d, bool positive) {
  if (!d.coeffs.empty()) {
    Rational lead = d.coeffs.begin()->second;
    if (kind == Atom::Kind::Eq) {
      d = d * (Rational(1) / lead);
    } else if (lead < 0 && integral(d)) {
      // d < 0  <=>  -d - 1 >= 0  <=>  not (-d - 1 < 0)
      d = -d - Affine::of(1);
      positive = !positive;
    }
  }
  return Condition{Atom{kind, std::move(d)}, positive};
}

} // namespace

bool Atom::eval(const std::map<std::string, Rational>& env) const {
  Rational v = d.eval(env);
  return kind == Kind::Eq ? v == 0 : v < 0;
}

std::string Atom::to_string() const {
  auto [l, r] = sides(d);
  return l + (kind == Kind::Eq ? " = " : " < ") + r;
}

bool Atom::operator<(const Atom& o) const {
  if (kind != o.kind)
    return kind < o.kind;
  return d < o.d;
}

bool Condition::eval(const std::map<std::string, Rational>& env) const {
  return atom.eval(env) == positive;
}

std::optional<bool> Condition::constant() const {
  if (!atom.d.is_constant())
    return std::nullopt;
  return atom.eval({}) == positive;
}

std::string Condition::to_string() const {
  auto [l, r] = sides(atom.d);
  const char* op = atom.kind == Atom::Kind::Eq ? (positive ? " = " : " != ")
                                               : (positive ? " < " : " >= ");
  return l + op + r;
}

bool Condition::operator<(const Condition& o) const {
  if (!(atom == o.atom))
    return atom < o.atom;
  return positive < o.positive;
}

Condition make_condition(hcir::CompareOp op, const Affine& lhs, const Affine& rhs) {
  using hcir::CompareOp;
  Affine d = lhs - rhs;
  switch (op) {
  case CompareOp::Eq:
    return normalized(Atom::Kind::Eq, d, true);
  case CompareOp::Ne:
    return normalized(Atom::Kind::Eq, d, false);
  case CompareOp::Lt:
    return normalized(Atom::Kind::Lt, d, true);
  case CompareOp::Ge:
    return normalized(Atom::Kind::Lt, d, false);
  case CompareOp::Le:
    return normalized(Atom::Kind::Lt, d - Affine::of(1), true);
  case CompareOp::Gt:
    return normalized(Atom::Kind::Lt, d - Affine::of(1), false);
  }
  return {};
}

Condition negate(Condition c) {
  c.positive = !c.positive;
  return c;
}

SymVal SymVal::affine(Affine a) {
  SymVal v;
  v.kind = Kind::Affine;
  v.value = std::move(a);
  return v;
}

SymVal SymVal::cmp(Condition c) {
  if (auto k = c.constant())
    return affine(Affine::of(*k ? 1 : 0));
  SymVal v;
  v.kind = Kind::Cmp;
  v.cond = std::move(c);
  return v;
}

SymVal SymVal::top() { return SymVal{}; }

std::set<std::string> SymVal::symbols() const {
  std::set<std::string> out;
  const Affine* a = kind == Kind::Affine ? &value : kind == Kind::Cmp ? &cond.atom.d : nullptr;
  if (a)
    for (const auto& [v, k] : a->coeffs)
      out.insert(v);
  return out;
}

std::string SymVal::to_string() const {
  switch (kind) {
  case Kind::Affine:
    return value.to_string();
  case Kind::Cmp:
    return "[" + cond.to_string() + "]";
  case Kind::Top:
    return "?";
  }
  return "?";
}

bool SymVal::operator==(const SymVal& o) const {
  if (kind != o.kind)
    return false;
  if (kind == Kind::Affine)
    return value == o.value;
  if (kind == Kind::Cmp)
    return cond == o.cond;
  return true;
}

bool SymVal::operator<(const SymVal& o) const {
  if (kind != o.kind)
    return kind < o.kind;
  if (kind == Kind::Affine)
    return value < o.value;
  if (kind == Kind::Cmp)
    return cond < o.cond;
  return false;
}

bool PendingCall::operator<(const PendingCall& o) const {
  return std::tie(pred, args) < std::tie(o.pred, o.args);
}

CostExpr CostExpr::leaf(ClosedForm form, std::vector<PendingCall> pending) {
  std::sort(pending.begin(), pending.end());
  auto n = std::make_shared<Node>();
  n->kind = Kind::Leaf;
  n->form = std::move(form);
  n->pending = std::move(pending);
  return CostExpr(std::move(n));
}

CostExpr CostExpr::unknown(std::string reason) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Unknown;
  n->reason = std::move(reason);
  return CostExpr(std::move(n));
}

CostExpr CostExpr::cond(const Condition& c, CostExpr then, CostExpr otherwise) {
  if (!c.positive)
    std::swap(then, otherwise);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Cond;
  n->atom = c.atom;
  n->then = std::make_shared<const CostExpr>(std::move(then));
  n->otherwise = std::make_shared<const CostExpr>(std::move(otherwise));
  return CostExpr(std::move(n));
}

bool CostExpr::operator==(const CostExpr& o) const {
  if (node_ == o.node_)
    return true;
  if (kind() != o.kind())
    return false;
  switch (kind()) {
  case Kind::Leaf:
    return form() == o.form() && pending() == o.pending();
  case Kind::Unknown:
    return reason() == o.reason();
  case Kind::Cond:
    return atom() == o.atom() && then() == o.then() && otherwise() == o.otherwise();
  }
  return false;
}

std::string CostExpr::to_string() const {
  switch (kind()) {
  case Kind::Leaf: {
    std::string out;
    if (!form().is_zero() || pending().empty())
      out = form().to_string();
    for (const auto& c : pending()) {
      out += out.empty() ? "" : " + ";
      out += c.pred + "(";
      for (std::size_t i = 0; i < c.args.size(); ++i)
        out += (i ? ", " : "") + c.args[i].to_string();
      out += ")";
    }
    return out;
  }
  case Kind::Unknown:
    return "unknown(" + reason() + ")";
  case Kind::Cond:
    return "(if " + atom().to_string() + " then " + then().to_string() + " else " +
           otherwise().to_string() + ")";
  }
  return "";
}

CostExpr operator+(const CostExpr& a, const CostExpr& b) {
  using K = CostExpr::Kind;
  if (a.kind() == K::Unknown)
    return a;
  if (b.kind() == K::Unknown)
    return b;
  if (a.kind() == K::Cond)
    return CostExpr::cond(Condition{a.atom(), true}, a.then() + b, a.otherwise() + b);
  if (b.kind() == K::Cond)
    return CostExpr::cond(Condition{b.atom(), true}, a + b.then(), a + b.otherwise());
  std::vector<PendingCall> pending = a.pending();
  pending.insert(pending.end(), b.pending().begin(), b.pending().end());
  return CostExpr::leaf(a.form() + b.form(), std::move(pending));
}

namespace {

CostExpr simplify_under(const CostExpr& e, std::map<Atom, bool>& known) {
  if (e.kind() != CostExpr::Kind::Cond)
    return e;
  const Atom& a = e.atom();
  std::optional<bool> truth = Condition{a, true}.constant();
  if (!truth)
    if (auto it = known.find(a); it != known.end())
      truth = it->second;
  if (truth)
    return simplify_under(*truth ? e.then() : e.otherwise(), known);
  known[a] = true;
  CostExpr t = simplify_under(e.then(), known);
  known[a] = false;
  CostExpr f = simplify_under(e.otherwise(), known);
  known.erase(a);
  if (t == f)
    return t;
  return CostExpr::cond(Condition{a, true}, t, f);
}

void collect(const CostExpr& e, std::set<std::string>& out) {
  switch (e.kind()) {
  case CostExpr::Kind::Leaf:
    for (const auto& v : e.form().variables())
      out.insert(v);
    for (const auto& c : e.pending())
      for (const auto& a : c.args)
        for (const auto& v : a.symbols())
          out.insert(v);
    break;
  case CostExpr::Kind::Unknown:
    break;
  case CostExpr::Kind::Cond:
    for (const auto& [v, k] : e.atom().d.coeffs)
      out.insert(v);
    collect(e.then(), out);
    collect(e.otherwise(), out);
    break;
  }
}

// Affine substitution when every mentioned symbol maps to an affine value.
std::optional<Affine> affine_subst(const Affine& a, const std::map<std::string, SymVal>& env) {
  std::map<std::string, Affine> m;
  for (const auto& [v, k] : a.coeffs) {
    auto it = env.find(v);
    if (it == env.end())
      continue;
    if (it->second.kind != SymVal::Kind::Affine)
      return std::nullopt;
    m[v] = it->second.value;
  }
  return a.subst(m);
}

SymVal subst_val(const SymVal& v, const std::map<std::string, SymVal>& env) {
  switch (v.kind) {
  case SymVal::Kind::Top:
    return v;
  case SymVal::Kind::Affine: {
    if (v.value.constant == 0 && v.value.coeffs.size() == 1 &&
        v.value.coeffs.begin()->second == 1) {
      auto it = env.find(v.value.coeffs.begin()->first);
      if (it != env.end())
        return it->second;
    }
    if (auto a = affine_subst(v.value, env))
      return SymVal::affine(*a);
    return SymVal::top();
  }
  case SymVal::Kind::Cmp: {
    auto d = affine_subst(v.cond.atom.d, env);
    if (!d)
      return SymVal::top();
    Condition c = normalized(v.cond.atom.kind, *d, v.cond.positive);
    return SymVal::cmp(c);
  }
  }
  return SymVal::top();
}

CostExpr subst_expr(const CostExpr& e, const std::map<std::string, SymVal>& env) {
  switch (e.kind()) {
  case CostExpr::Kind::Unknown:
    return e;
  case CostExpr::Kind::Leaf: {
    std::map<std::string, Affine> m;
    for (const auto& v : e.form().variables()) {
      auto it = env.find(v);
      if (it == env.end())
        continue;
      if (it->second.kind != SymVal::Kind::Affine)
        return CostExpr::unknown("cost depends on " + v + " whose size is " +
                                 (it->second.kind == SymVal::Kind::Top ? "unknown"
                                                                       : "a comparison"));
      m[v] = it->second.value;
    }
    std::vector<PendingCall> pending;
    for (const auto& c : e.pending()) {
      PendingCall pc{c.pred, {}};
      for (const auto& a : c.args)
        pc.args.push_back(subst_val(a, env));
      pending.push_back(std::move(pc));
    }
    return CostExpr::leaf(e.form().subst(m), std::move(pending));
  }
  case CostExpr::Kind::Cond: {
    const Atom& a = e.atom();
    CostExpr t = subst_expr(e.then(), env);
    CostExpr f = subst_expr(e.otherwise(), env);
    if (auto d = affine_subst(a.d, env))
      return CostExpr::cond(normalized(a.kind, *d, true), t, f);
    // A comparison outcome Z in {0, 1} tested on its own.
    std::string cmp_symbol;
    for (const auto& [v, k] : a.d.coeffs) {
      auto it = env.find(v);
      if (it == env.end() || it->second.kind == SymVal::Kind::Affine)
        continue;
      if (it->second.kind == SymVal::Kind::Top || !cmp_symbol.empty())
        return CostExpr::unknown("condition " + a.to_string() + " on an unknown value");
      cmp_symbol = v;
    }
    if (a.d.coeffs.size() != 1)
      return CostExpr::unknown("condition " + a.to_string() + " mixes a comparison outcome");
    const Condition& c = env.at(cmp_symbol).cond;
    bool at0 = a.eval({{cmp_symbol, Rational(0)}});
    bool at1 = a.eval({{cmp_symbol, Rational(1)}});
    if (at0 == at1)
      return at0 ? t : f;
    return CostExpr::cond(at1 ? c : negate(c), t, f);
  }
  }
  return e;
}

void flatten_into(const CostExpr& e, std::vector<Condition>& path, std::vector<Case>& out) {
  if (e.kind() != CostExpr::Kind::Cond) {
    out.push_back({path, e});
    return;
  }
  path.push_back(Condition{e.atom(), true});
  flatten_into(e.then(), path, out);
  path.back().positive = false;
  flatten_into(e.otherwise(), path, out);
  path.pop_back();
}

} // namespace

CostExpr simplify(const CostExpr& e) {
  std::map<Atom, bool> known;
  return simplify_under(e, known);
}

std::set<std::string> free_symbols(const CostExpr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}

CostExpr substitute(const CostExpr& e, const std::map<std::string, SymVal>& env) {
  return subst_expr(e, env);
}

std::vector<Case> flatten(const CostExpr& e) {
  std::vector<Case> out;
  std::vector<Condition> path;
  flatten_into(e, path, out);
  return out;
}

} // namespace irenergy::analysis
