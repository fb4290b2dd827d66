#include "irenergy/analysis/analysis.hpp"
#include "irenergy/support/error.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace irenergy::analysis {

using hcir::CompareOp;
using hcir::Literal;
using recsolve::ClosedForm;

SizeMetric size_metric(const hcir::RegularType& t) {
  switch (t.kind) {
  case hcir::RegularType::Kind::List:
    return SizeMetric::Length;
  case hcir::RegularType::Kind::Functor:
    return SizeMetric::Structural;
  default:
    return SizeMetric::IntValue;
  }
}

namespace {

std::optional<std::int64_t> head_constant(const std::string& h) {
  if (h.empty() || !(std::isdigit(static_cast<unsigned char>(h[0])) || h[0] == '-'))
    return std::nullopt;
  try {
    std::size_t used = 0;
    long long v = std::stoll(h, &used);
    if (used == h.size())
      return v;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

std::size_t input_count(const hcir::HCProgram& p, const std::string& pred, std::size_t arity) {
  const auto* sig = p.find_pred(pred);
  return sig ? std::min(sig->inputs, arity) : arity;
}

SymVal term_value(const hcir::Term& t, const std::map<std::string, SymVal>& env) {
  if (!t.is_var)
    return SymVal::affine(Affine::of(Rational(static_cast<long>(t.value))));
  auto it = env.find(t.var);
  return it == env.end() ? SymVal::top() : it->second;
}

// Outcome of a test literal: always, never, a condition, or undecidable.
struct TestOutcome {
  enum class Kind { Always, Never, Cond, Unknown } kind = Kind::Unknown;
  Condition cond;
};

TestOutcome from_condition(const Condition& c) {
  if (auto k = c.constant())
    return {*k ? TestOutcome::Kind::Always : TestOutcome::Kind::Never, {}};
  return {TestOutcome::Kind::Cond, c};
}

TestOutcome test_outcome(CompareOp op, const SymVal& a, const SymVal& b) {
  if (a.kind == SymVal::Kind::Affine && b.kind == SymVal::Kind::Affine)
    return from_condition(make_condition(op, a.value, b.value));
  // A comparison outcome (0 or 1) against a constant.
  const SymVal* z = nullptr;
  std::optional<Rational> c;
  bool flipped = false;
  if (a.kind == SymVal::Kind::Cmp && b.kind == SymVal::Kind::Affine && b.value.is_constant()) {
    z = &a;
    c = b.value.constant;
  } else if (b.kind == SymVal::Kind::Cmp && a.kind == SymVal::Kind::Affine &&
             a.value.is_constant()) {
    z = &b;
    c = a.value.constant;
    flipped = true;
  }
  if (!z)
    return {};
  auto holds = [&](int zv) {
    Affine lhs = Affine::of(flipped ? *c : Rational(zv));
    Affine rhs = Affine::of(flipped ? Rational(zv) : *c);
    return *make_condition(op, lhs, rhs).constant();
  };
  bool at0 = holds(0), at1 = holds(1);
  if (at0 == at1)
    return {at0 ? TestOutcome::Kind::Always : TestOutcome::Kind::Never, {}};
  return {TestOutcome::Kind::Cond, at1 ? z->cond : negate(z->cond)};
}

// Output of a comparison predicate: the condition of its clause yielding 1.
SymVal test_pred_output(const hcir::HCProgram& p, const std::string& pred,
                        const std::vector<SymVal>& inputs) {
  for (const auto* c : p.clauses_of(pred)) {
    if (c->head.empty() || head_constant(c->head.back()) != 1 || c->body.size() != 1 ||
        c->body[0].kind != Literal::Kind::Compare)
      continue;
    const Literal& l = c->body[0];
    auto value = [&](const hcir::Term& t) {
      if (!t.is_var)
        return SymVal::affine(Affine::of(Rational(static_cast<long>(t.value))));
      for (std::size_t i = 0; i + 1 < c->head.size() && i < inputs.size(); ++i)
        if (c->head[i] == t.var)
          return inputs[i];
      return SymVal::top();
    };
    TestOutcome o = test_outcome(l.op, value(l.args[0]), value(l.args[1]));
    switch (o.kind) {
    case TestOutcome::Kind::Always:
      return SymVal::affine(Affine::of(1));
    case TestOutcome::Kind::Never:
      return SymVal::affine(Affine::of(0));
    case TestOutcome::Kind::Cond:
      return SymVal::cmp(o.cond);
    case TestOutcome::Kind::Unknown:
      return SymVal::top();
    }
  }
  return SymVal::top();
}

// Output sizes from an assertion's `size` relations, else nullopt.
std::optional<SymVal> asserted_size(const hcir::TrustAssertion* a, std::size_t out,
                                    const std::vector<SymVal>& args) {
  if (!a)
    return std::nullopt;
  for (const auto& r : a->sizes) {
    if (r.arg != out)
      continue;
    if (!(r.lower == r.upper) || r.lower.kind != hcir::SizeExpr::Kind::Affine)
      return SymVal::top();
    std::map<std::string, Affine> env;
    for (const auto& [v, k] : r.lower.affine.coeffs) {
      std::size_t idx = std::stoul(v.substr(1));
      if (idx >= args.size() || args[idx].kind != SymVal::Kind::Affine)
        return SymVal::top();
      env[v] = args[idx].value;
    }
    return SymVal::affine(r.lower.affine.subst(env));
  }
  return SymVal::top();
}

struct ClauseSummary {
  std::vector<Condition> guards;
  bool never = false;
  std::string unknown;  // non-empty when a guard cannot be decided
  std::vector<PendingCall> calls;
  std::vector<std::pair<std::size_t, std::vector<SymVal>>> call_inputs;
};

ClauseSummary summarize_clause(const hcir::HCProgram& p, const hcir::Clause& c,
                               const std::vector<std::string>& symbols) {
  ClauseSummary s;
  std::map<std::string, SymVal> env;
  std::size_t inputs = input_count(p, c.pred, c.head.size());

  auto add_test = [&](const TestOutcome& o, const std::string& what) {
    switch (o.kind) {
    case TestOutcome::Kind::Always:
      break;
    case TestOutcome::Kind::Never:
      s.never = true;
      break;
    case TestOutcome::Kind::Cond:
      s.guards.push_back(o.cond);
      break;
    case TestOutcome::Kind::Unknown:
      if (s.unknown.empty())
        s.unknown = "test " + what + " in " + c.pred + " is on a value of unknown size";
      break;
    }
  };

  for (std::size_t i = 0; i < inputs && i < symbols.size(); ++i) {
    const std::string& h = c.head[i];
    SymVal sym = SymVal::affine(Affine::var(symbols[i]));
    if (auto k = head_constant(h)) {
      add_test(test_outcome(CompareOp::Eq, sym, SymVal::affine(Affine::of(Rational(static_cast<long>(*k))))),
               symbols[i] + " = " + h);
    } else if (auto it = env.find(h); it != env.end()) {
      add_test(test_outcome(CompareOp::Eq, it->second, sym), h + " = " + symbols[i]);
    } else {
      env[h] = sym;
    }
  }

  auto bind = [&](const hcir::Term& t, SymVal v) {
    if (t.is_var)
      env[t.var] = std::move(v);
  };

  for (std::size_t li = 0; li < c.body.size(); ++li) {
    const Literal& l = c.body[li];
    switch (l.kind) {
    case Literal::Kind::Guard:
      add_test(test_outcome(CompareOp::Eq, term_value(l.args[0], env), term_value(l.args[1], env)),
               hcir::to_string(l.args[0]) + "=" + hcir::to_string(l.args[1]));
      break;
    case Literal::Kind::Compare:
      add_test(test_outcome(l.op, term_value(l.args[0], env), term_value(l.args[1], env)),
               hcir::to_string(l.args[0]) + " " + hcir::compare_symbol(l.op) + " " +
                   hcir::to_string(l.args[1]));
      break;
    case Literal::Kind::Builtin: {
      const auto* info = hcir::builtin_info(l.name);
      if (!info || l.args.empty())
        break;
      std::vector<SymVal> in;
      for (std::size_t i = 0; i < info->inputs && i < l.args.size(); ++i)
        in.push_back(term_value(l.args[i], env));
      SymVal out = SymVal::top();
      auto both_affine = in.size() >= 2 && in[0].kind == SymVal::Kind::Affine &&
                         in[1].kind == SymVal::Kind::Affine;
      if (l.name == "add" && both_affine) {
        out = SymVal::affine(in[0].value + in[1].value);
      } else if (l.name == "sub" && both_affine) {
        out = SymVal::affine(in[0].value - in[1].value);
      } else if (l.name == "mul" && both_affine) {
        if (in[0].value.is_constant())
          out = SymVal::affine(in[1].value * in[0].value.constant);
        else if (in[1].value.is_constant())
          out = SymVal::affine(in[0].value * in[1].value.constant);
      } else if (l.name == "zext" || l.name == "ret") {
        out = in[0];
      } else if (info->abstract) {
        const auto* a = p.find_assertion(l.name, l.args.size());
        if (auto v = asserted_size(a, l.args.size() - 1, in)) {
          out = *v;
        } else if (l.name == "set_nth") {
          out = in[1];
        } else if (l.name == "mk_list") {
          out = in[0];
        }
      }
      bind(l.args.back(), out);
      break;
    }
    case Literal::Kind::Call: {
      std::size_t n = input_count(p, l.name, l.args.size());
      std::vector<SymVal> in;
      for (std::size_t i = 0; i < n; ++i)
        in.push_back(term_value(l.args[i], env));
      const auto* sig = p.find_pred(l.name);
      bool is_test = sig && sig->kind == hcir::PredKind::Test;
      bool external = p.clauses_of(l.name).empty();
      const auto* a = external ? p.find_assertion(l.name, l.args.size()) : nullptr;
      for (std::size_t i = n; i < l.args.size(); ++i) {
        SymVal out = SymVal::top();
        if (is_test)
          out = test_pred_output(p, l.name, in);
        else if (auto v = asserted_size(a, i, in))
          out = *v;
        bind(l.args[i], out);
      }
      if (!is_test) {
        s.calls.push_back({l.name, in});
        s.call_inputs.emplace_back(li, std::move(in));
      }
      break;
    }
    }
  }
  return s;
}

void atom_symbols(const CostExpr& e, std::set<std::string>& out) {
  if (e.kind() != CostExpr::Kind::Cond)
    return;
  for (const auto& [v, k] : e.atom().d.coeffs)
    out.insert(v);
  atom_symbols(e.then(), out);
  atom_symbols(e.otherwise(), out);
}

void leaf_calls(const CostExpr& e, std::vector<const PendingCall*>& out) {
  if (e.kind() == CostExpr::Kind::Leaf) {
    for (const auto& c : e.pending())
      out.push_back(&c);
  } else if (e.kind() == CostExpr::Kind::Cond) {
    leaf_calls(e.then(), out);
    leaf_calls(e.otherwise(), out);
  }
}

std::optional<Rational> try_eval(const Affine& a, const std::map<std::string, Rational>& env) {
  for (const auto& [v, k] : a.coeffs)
    if (!env.count(v))
      return std::nullopt;
  return a.eval(env);
}

} // namespace

std::vector<std::string> head_symbols(const hcir::HCProgram& p, const std::string& pred) {
  auto clauses = p.clauses_of(pred);
  std::size_t arity = 0;
  if (const auto* sig = p.find_pred(pred))
    arity = sig->arity;
  if (!clauses.empty()) {
    const auto& head = clauses.front()->head;
    std::set<std::string> seen;
    bool ok = true;
    for (const auto& h : head)
      ok = ok && !head_constant(h) && seen.insert(h).second;
    if (ok)
      return head;
    arity = head.size();
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arity; ++i)
    out.push_back("A" + std::to_string(i));
  return out;
}

std::vector<CallSizes> infer_size_relations(const hcir::HCProgram& p) {
  std::vector<CallSizes> out;
  std::map<std::string, std::vector<std::string>> symbols;
  for (std::size_t ci = 0; ci < p.clauses.size(); ++ci) {
    const auto& c = p.clauses[ci];
    auto it = symbols.find(c.pred);
    if (it == symbols.end())
      it = symbols.emplace(c.pred, head_symbols(p, c.pred)).first;
    ClauseSummary s = summarize_clause(p, c, it->second);
    for (const auto& [li, in] : s.call_inputs) {
      CallSizes cs{ci, li, c.body[li].name, {}};
      for (const auto& v : in)
        cs.args.push_back(v.kind == SymVal::Kind::Affine ? std::optional<Affine>(v.value)
                                                          : std::nullopt);
      out.push_back(std::move(cs));
    }
  }
  return out;
}

bool EquationSystem::relevant_at(const std::string& pred, std::size_t arg) const {
  auto it = preds.find(pred);
  if (it == preds.end() || arg >= it->second.params.size())
    return false;
  return it->second.relevant.count(it->second.params[arg]) > 0;
}

EquationSystem extract_recurrences(const hcir::HCProgram& p, const energy::CostMap& costs) {
  if (costs.size() != p.clauses.size())
    throw Error("analysis", "cost map covers " + std::to_string(costs.size()) + " of " +
                                std::to_string(p.clauses.size()) + " clauses");
  EquationSystem sys;
  sys.graph = build_call_graph(p);

  for (const auto& name : sys.graph.nodes) {
    auto clauses = p.clauses_of(name);
    const auto* sig = p.find_pred(name);
    if (clauses.empty()) {
      std::size_t arity = sig ? sig->arity : 0;
      for (const auto& e : sys.graph.edges)
        if (e.callee == name)
          arity = p.clauses[e.clause].body[e.literal].args.size();
      const auto* a = p.find_assertion(name, arity);
      if (a && a->energy)
        sys.external_energy[name] = *a->energy;
      else
        sys.externals_without_energy.insert(name);
      continue;
    }
    if (sig && sig->kind == hcir::PredKind::Test)
      continue;

    PredEquations eq;
    eq.pred = name;
    std::vector<std::string> symbols = head_symbols(p, name);
    std::size_t inputs = input_count(p, name, symbols.size());
    eq.params.assign(symbols.begin(), symbols.begin() + static_cast<long>(inputs));

    // First matching clause wins: fold from the last clause.
    std::vector<std::size_t> indices;
    for (std::size_t ci = 0; ci < p.clauses.size(); ++ci)
      if (p.clauses[ci].pred == name)
        indices.push_back(ci);
    CostExpr expr = CostExpr::unknown("no clause of " + name + " applies");
    for (auto it = indices.rbegin(); it != indices.rend(); ++it) {
      ClauseSummary s = summarize_clause(p, p.clauses[*it], symbols);
      if (s.never)
        continue;
      if (!s.unknown.empty()) {
        expr = CostExpr::unknown(s.unknown);
        continue;
      }
      CostExpr body = CostExpr::leaf(ClosedForm(costs[*it]), s.calls);
      for (auto g = s.guards.rbegin(); g != s.guards.rend(); ++g)
        body = CostExpr::cond(*g, body, expr);
      expr = body;
    }
    eq.expr = simplify(expr);
    sys.preds.emplace(name, std::move(eq));
  }

  // Relevance: least fixpoint over guards and relevant call arguments.
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [name, eq] : sys.preds) {
      std::set<std::string> rel;
      atom_symbols(eq.expr, rel);
      std::vector<const PendingCall*> calls;
      leaf_calls(eq.expr, calls);
      for (const auto* c : calls)
        for (std::size_t j = 0; j < c->args.size(); ++j)
          if (sys.relevant_at(c->pred, j))
            for (const auto& v : c->args[j].symbols())
              rel.insert(v);
      if (rel != eq.relevant) {
        eq.relevant = std::move(rel);
        changed = true;
      }
    }
  }

  for (auto& [name, eq] : sys.preds)
    for (auto& c : flatten(eq.expr))
      eq.equations.push_back({std::move(c.path), std::move(c.leaf)});
  return sys;
}

EquationEvaluator::EquationEvaluator(const EquationSystem& sys, long state_limit)
    : sys_(sys), state_limit_(state_limit) {}

std::optional<Rational> EquationEvaluator::cost(const std::string& pred,
                                                const std::map<std::string, Rational>& args) {
  failure_.clear();
  auto make_key = [&](const std::string& q,
                      const std::function<std::optional<Rational>(std::size_t)>& arg) -> Key {
    Key k{q, {}};
    auto it = sys_.preds.find(q);
    if (it == sys_.preds.end())
      return k;
    for (std::size_t j = 0; j < it->second.params.size(); ++j)
      k.second.push_back(sys_.relevant_at(q, j) ? arg(j) : std::nullopt);
    return k;
  };
  auto root_it = sys_.preds.find(pred);
  if (root_it == sys_.preds.end()) {
    failure_ = "no equations for " + pred;
    return std::nullopt;
  }
  Key root = make_key(pred, [&](std::size_t j) -> std::optional<Rational> {
    auto a = args.find(root_it->second.params[j]);
    return a == args.end() ? std::nullopt : std::optional<Rational>(a->second);
  });

  std::vector<Key> stack{root};
  std::set<Key> active{root};
  while (!stack.empty()) {
    if (static_cast<long>(memo_.size() + stack.size()) > state_limit_) {
      failure_ = "evaluation exceeded " + std::to_string(state_limit_) + " states";
      return std::nullopt;
    }
    Key key = stack.back();
    if (memo_.count(key)) {
      stack.pop_back();
      active.erase(key);
      continue;
    }
    const PredEquations& eq = sys_.preds.at(key.first);
    std::map<std::string, Rational> env;
    for (std::size_t j = 0; j < eq.params.size(); ++j)
      if (key.second[j])
        env[eq.params[j]] = *key.second[j];

    const CostExpr* e = &eq.expr;
    while (e->kind() == CostExpr::Kind::Cond) {
      auto d = try_eval(e->atom().d, env);
      if (!d) {
        failure_ = "guard " + e->atom().to_string() + " of " + key.first + " needs a missing size";
        return std::nullopt;
      }
      bool holds = e->atom().kind == Atom::Kind::Eq ? *d == 0 : *d < 0;
      e = holds ? &e->then() : &e->otherwise();
    }
    if (e->kind() == CostExpr::Kind::Unknown) {
      failure_ = e->reason();
      return std::nullopt;
    }
    auto base = e->form().constant_value();
    if (!base) {
      failure_ = "non-constant clause cost in " + key.first;
      return std::nullopt;
    }
    Rational total = *base;
    bool ready = true;
    for (const auto& c : e->pending()) {
      if (auto x = sys_.external_energy.find(c.pred); x != sys_.external_energy.end()) {
        total += x->second;
        continue;
      }
      if (!sys_.preds.count(c.pred)) {
        failure_ = "no energy for " + c.pred;
        return std::nullopt;
      }
      std::string missing;
      Key callee = make_key(c.pred, [&](std::size_t j) -> std::optional<Rational> {
        if (j >= c.args.size())
          return std::nullopt;
        const SymVal& v = c.args[j];
        if (v.kind == SymVal::Kind::Affine)
          if (auto r = try_eval(v.value, env))
            return r;
        if (v.kind == SymVal::Kind::Cmp)
          if (auto r = try_eval(v.cond.atom.d, env)) {
            Atom a{v.cond.atom.kind, Affine::of(*r)};
            return Rational(a.eval({}) == v.cond.positive ? 1 : 0);
          }
        missing = "argument " + std::to_string(j) + " of " + c.pred + " has unknown size";
        return std::nullopt;
      });
      if (!missing.empty()) {
        failure_ = missing;
        return std::nullopt;
      }
      if (auto m = memo_.find(callee); m != memo_.end()) {
        total += m->second;
        continue;
      }
      // One child at a time keeps the stack equal to the chain of callers.
      ready = false;
      if (active.count(callee)) {
        failure_ = "call cycle through " + c.pred + " does not terminate";
        return std::nullopt;
      }
      stack.push_back(callee);
      active.insert(callee);
      break;
    }
    if (ready) {
      memo_[key] = total;
      stack.pop_back();
      active.erase(key);
    }
  }
  return memo_.at(root);
}

} // namespace irenergy::analysis
