#include "irenergy/analysis/analysis.hpp"
#include "irenergy/support/error.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace irenergy::analysis {

using recsolve::ClosedForm;
using recsolve::OpaqueCall;

std::optional<Ranking> detect_ranking_argument(const std::vector<std::string>& params,
                                               const std::set<std::string>& relevant,
                                               const std::vector<std::vector<Affine>>& self_calls) {
  if (self_calls.empty())
    return std::nullopt;
  for (std::size_t r = 0; r < params.size(); ++r) {
    if (!relevant.count(params[r]))
      continue;
    Ranking rk{r, params[r], {}};
    bool ok = true;
    for (const auto& args : self_calls) {
      if (args.size() != params.size()) {
        ok = false;
        break;
      }
      Affine step = args[r] - Affine::var(params[r]);
      if (!step.is_constant() || !is_integer(step.constant) || step.constant > -1) {
        ok = false;
        break;
      }
      rk.decrements.insert(-step.constant.get_num().get_si());
    }
    if (ok)
      return rk;
  }
  return std::nullopt;
}

const HeaderRecurrence* Analysis::header(const std::string& pred) const {
  for (const auto& h : headers)
    if (h.pred == pred)
      return &h;
  return nullptr;
}

const FunctionReport* Analysis::function(const std::string& name) const {
  for (const auto& f : functions)
    if (f.function == name)
      return &f;
  return nullptr;
}

namespace {

CostExpr scale(const CostExpr& e, const ClosedForm& k) {
  return map_leaves(e, [&](const CostExpr& leaf) {
    return CostExpr::leaf(k * leaf.form(), leaf.pending());
  });
}

class Solver {
public:
  Solver(const hcir::HCProgram& p, Analysis& out) : p_(p), out_(out), sys_(out.system) {}

  void run() {
    for (const auto& scc : sys_.graph.sccs)
      solve_set(scc, {});
  }

private:
  const hcir::HCProgram& p_;
  Analysis& out_;
  const EquationSystem& sys_;

  const PredEquations* equations(const std::string& pred) const {
    auto it = sys_.preds.find(pred);
    return it == sys_.preds.end() ? nullptr : &it->second;
  }

  CostExpr call_cost(const PendingCall& c, const std::set<std::string>& opaque) {
    if (auto it = sys_.external_energy.find(c.pred); it != sys_.external_energy.end())
      return CostExpr::leaf(ClosedForm(it->second));
    const PredEquations* eq = equations(c.pred);
    if (!eq)
      return CostExpr::unknown("no energy for " + c.pred);
    if (opaque.count(c.pred)) {
      OpaqueCall call{c.pred, {}};
      for (std::size_t j = 0; j < eq->params.size(); ++j) {
        if (!sys_.relevant_at(c.pred, j)) {
          call.args.push_back(Affine::of(0));
          continue;
        }
        const SymVal& v = j < c.args.size() ? c.args[j] : SymVal();
        if (v.kind != SymVal::Kind::Affine)
          return CostExpr::unknown("argument " + eq->params[j] + " of recursive " + c.pred +
                                   (v.kind == SymVal::Kind::Top ? " has unknown size"
                                                                : " is a comparison outcome"));
        call.args.push_back(v.value);
      }
      return CostExpr::leaf(ClosedForm::opaque(std::move(call)));
    }
    auto it = out_.resolved.find(c.pred);
    if (it == out_.resolved.end())
      return CostExpr::unknown("cost of " + c.pred + " is not available");
    std::map<std::string, SymVal> env;
    for (std::size_t j = 0; j < eq->params.size(); ++j)
      env[eq->params[j]] = j < c.args.size() ? c.args[j] : SymVal::top();
    return substitute(it->second, env);
  }

  CostExpr resolve(const CostExpr& e, const std::set<std::string>& opaque) {
    return simplify(map_leaves(e, [&](const CostExpr& leaf) {
      CostExpr sum = CostExpr::leaf(leaf.form());
      for (const auto& c : leaf.pending())
        sum = sum + call_cost(c, opaque);
      return sum;
    }));
  }

  // Replaces opaque calls to `h` by its resolved cost.
  CostExpr substitute_header(const CostExpr& e, const std::string& h) {
    const CostExpr& cost = out_.resolved.at(h);
    const auto& params = sys_.preds.at(h).params;
    return simplify(map_leaves(e, [&](const CostExpr& leaf) {
      std::vector<recsolve::Term> rest;
      CostExpr sum = CostExpr::leaf(ClosedForm());
      for (const auto& t : leaf.form().terms()) {
        if (!t.call || t.call->pred != h) {
          rest.push_back(t);
          continue;
        }
        recsolve::Term k = t;
        k.call.reset();
        std::map<std::string, SymVal> env;
        for (std::size_t j = 0; j < params.size() && j < t.call->args.size(); ++j)
          env[params[j]] = SymVal::affine(t.call->args[j]);
        sum = sum + scale(substitute(cost, env), ClosedForm::from_terms({k}));
      }
      return CostExpr::leaf(ClosedForm::from_terms(rest), leaf.pending()) + sum;
    }));
  }

  std::string choose_header(const std::vector<std::string>& members) const {
    std::set<std::string> in(members.begin(), members.end());
    std::set<std::string> called_from_outside;
    for (const auto& e : sys_.graph.edges)
      if (in.count(e.callee) && !in.count(e.caller))
        called_from_outside.insert(e.callee);
    auto kind_rank = [&](const std::string& m) {
      const auto* sig = p_.find_pred(m);
      return sig && sig->kind == hcir::PredKind::Dispatch ? 1 : 0;
    };
    std::vector<std::string> candidates(called_from_outside.begin(), called_from_outside.end());
    if (candidates.empty())
      for (const auto& f : p_.functions)
        if (in.count(f.entry))
          candidates.push_back(f.entry);
    if (candidates.empty())
      candidates = members;
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const auto& a, const auto& b) { return kind_rank(a) < kind_rank(b); });
    return candidates.front();
  }

  void solve_set(const std::vector<std::string>& members, const std::set<std::string>& opaque) {
    std::set<std::string> in(members.begin(), members.end());
    std::map<std::string, std::set<std::string>> succ;
    for (const auto& e : sys_.graph.edges)
      if (in.count(e.caller) && in.count(e.callee))
        succ[e.caller].insert(e.callee);
    for (const auto& scc : strongly_connected(members, succ)) {
      bool self = scc.size() == 1 && succ[scc[0]].count(scc[0]);
      if (scc.size() == 1 && !self) {
        if (const auto* eq = equations(scc[0]))
          out_.resolved[scc[0]] = resolve(eq->expr, opaque);
        continue;
      }
      std::string h = choose_header(scc);
      std::vector<std::string> rest;
      for (const auto& m : scc)
        if (m != h)
          rest.push_back(m);
      std::set<std::string> inner = opaque;
      inner.insert(h);
      solve_set(rest, inner);
      CostExpr expanded = resolve(equations(h)->expr, inner);
      out_.resolved[h] = solve_header(h, expanded);
      for (const auto& m : rest)
        if (out_.resolved.count(m))
          out_.resolved[m] = substitute_header(out_.resolved[m], h);
    }
  }

  CostExpr fail(HeaderRecurrence& hr, const std::string& why) {
    hr.failure = why;
    out_.headers.push_back(hr);
    return CostExpr::unknown(why);
  }

  CostExpr solve_header(const std::string& h, const CostExpr& expanded) {
    const PredEquations& eq = sys_.preds.at(h);
    HeaderRecurrence hr;
    hr.pred = h;
    std::vector<Case> cases = flatten(expanded);

    std::vector<std::vector<Affine>> self_calls;
    for (const auto& c : cases)
      if (c.leaf.kind() == CostExpr::Kind::Leaf)
        for (const auto& t : c.leaf.form().terms())
          if (t.call && t.call->pred == h)
            self_calls.push_back(t.call->args);
    if (self_calls.empty()) {
      // Every recursive path was unknown or unreachable.
      bool unknown = std::any_of(cases.begin(), cases.end(), [](const Case& c) {
        return c.leaf.kind() == CostExpr::Kind::Unknown;
      });
      if (!unknown)
        return expanded;
      for (const auto& c : cases)
        if (c.leaf.kind() == CostExpr::Kind::Unknown)
          return fail(hr, c.leaf.reason());
    }

    hr.ranking = detect_ranking_argument(eq.params, eq.relevant, self_calls);
    if (!hr.ranking)
      return fail(hr, "no argument of " + h + " decreases on every recursive call");
    const std::string x = hr.ranking->symbol;
    const std::size_t r = hr.ranking->index;
    const long maxd = *hr.ranking->decrements.rbegin();
    // The other sizes are constants of the recurrence.
    for (const auto& args : self_calls)
      for (std::size_t j = 0; j < eq.params.size(); ++j)
        if (j != r && eq.relevant.count(eq.params[j]) && args[j] != Affine::var(eq.params[j]))
          return fail(hr, "size " + eq.params[j] + " of " + h + " changes across recursive calls");

    Rational bound = 0;
    for (const auto& c : cases)
      for (const auto& cond : c.path) {
        const Affine& d = cond.atom.d;
        for (const auto& [v, k] : d.coeffs)
          if (v != x)
            return fail(hr, "guard " + cond.to_string() + " of " + h + " depends on " + v +
                                " besides the ranking argument " + x);
        Rational root = -d.constant / d.coeff(x);
        bound = std::max(bound, Rational(abs(root)));
      }
    const long K = static_cast<long>(round_half_away(bound).get_si()) + 3 + maxd;

    auto case_at = [&](long k) -> const Case* {
      std::map<std::string, Rational> env{{x, Rational(k)}};
      for (const auto& c : cases)
        if (std::all_of(c.path.begin(), c.path.end(),
                        [&](const Condition& cond) { return cond.eval(env); }))
          return &c;
      return nullptr;
    };

    const Case* steady = case_at(K);
    if (!steady || steady->leaf.kind() != CostExpr::Kind::Leaf)
      return fail(hr, steady ? steady->leaf.reason() : "no case of " + h + " for large " + x);
    long n0 = K;
    while (n0 > 0 && case_at(n0 - 1) == steady)
      --n0;

    recsolve::Recurrence rec;
    rec.name = h;
    rec.var = x;
    std::vector<recsolve::Term> q_terms;
    long order = 0;
    for (const auto& t : steady->leaf.form().terms()) {
      if (!t.call || t.call->pred != h) {
        q_terms.push_back(t);
        continue;
      }
      if (!t.powers.empty() || !t.exps.empty())
        return fail(hr, "recursive call of " + h + " has a size-dependent factor");
      long d = -(t.call->args[r] - Affine::var(x)).constant.get_num().get_si();
      rec.terms.push_back({t.coeff, 1, d});
      order = std::max(order, d);
    }
    if (rec.terms.empty())
      return fail(hr, h + " does not recurse for large " + x);
    rec.q = ClosedForm::from_terms(q_terms);
    rec.start = std::max(n0, order);

    // Initial values by unrolling the cases symbolically.
    std::map<long, ClosedForm> memo;
    std::string unroll_failure;
    std::function<std::optional<ClosedForm>(long)> value_at = [&](long k) -> std::optional<ClosedForm> {
      if (auto it = memo.find(k); it != memo.end())
        return it->second;
      if (k < -(K + 8)) {
        unroll_failure = h + " has no base case below " + x + " = 0";
        return std::nullopt;
      }
      const Case* c = case_at(k);
      if (!c || c->leaf.kind() != CostExpr::Kind::Leaf) {
        unroll_failure = c ? c->leaf.reason() : "no case of " + h + " at " + x + " = " + std::to_string(k);
        return std::nullopt;
      }
      ClosedForm f = c->leaf.form().subst({{x, Affine::of(k)}});
      bool ok = true;
      ClosedForm v = f.resolve_calls([&](const OpaqueCall& call) -> std::optional<ClosedForm> {
        if (call.pred != h || !ok)
          return std::nullopt;
        auto sub = value_at(call.args[r].constant.get_num().get_si());
        if (!sub)
          ok = false;
        return sub ? sub : std::optional<ClosedForm>(ClosedForm());
      });
      if (!ok)
        return std::nullopt;
      memo[k] = v;
      return v;
    };
    for (long k = 0; k < rec.start; ++k) {
      auto v = value_at(k);
      if (!v)
        return fail(hr, unroll_failure);
      rec.initial.push_back(*v);
    }
    hr.recurrence = rec;

    recsolve::SolveResult sr = recsolve::solve_recurrence(rec);
    if (!sr.solution)
      return fail(hr, "recurrence of " + h + " unsolved: " + sr.reason);
    recsolve::Verdict v = recsolve::verify_solution(*sr.solution, rec);
    if (!v.ok)
      return fail(hr, "closed form of " + h + " failed verification: " + v.detail);
    hr.solution = sr.solution;
    out_.headers.push_back(hr);

    CostExpr result = CostExpr::leaf(sr.solution->form);
    for (long k = sr.solution->valid_from - 1; k >= 0; --k)
      result = CostExpr::cond(make_condition(hcir::CompareOp::Eq, Affine::var(x), Affine::of(k)),
                              CostExpr::leaf(rec.initial[static_cast<std::size_t>(k)]), result);
    return result;
  }
};

std::string point_text(const std::map<std::string, Rational>& env) {
  std::string out;
  for (const auto& [v, k] : env)
    out += (out.empty() ? "" : ", ") + v + " = " + format_exact(k);
  return out;
}

void gate(const EquationSystem& sys, FunctionReport& fr, const ClosedForm& cf,
          const AnalysisOptions& opts) {
  std::vector<std::string> vars = fr.params;
  for (const auto& v : cf.variables())
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
      fr.reason = "closed form mentions " + v + ", which is not a size of " + fr.function;
      return;
    }
  long upto = vars.size() <= 1 ? opts.grid_1 : vars.size() == 2 ? opts.grid_2 : opts.grid_3;
  EquationEvaluator ev(sys);
  std::vector<long> point(vars.size(), 0);
  while (true) {
    std::map<std::string, Rational> env;
    for (std::size_t i = 0; i < vars.size(); ++i)
      env[vars[i]] = point[i];
    auto expect = ev.cost(fr.entry, env);
    if (!expect) {
      fr.reason = "equations cannot be evaluated at " + point_text(env) + ": " + ev.failure();
      return;
    }
    Rational got = cf.evaluate(env);
    if (got != *expect) {
      fr.reason = "closed form gives " + format_exact(got) + " but the equations give " +
                  format_exact(*expect) + " at " + point_text(env);
      return;
    }
    std::size_t i = 0;
    while (i < point.size() && point[i] == upto)
      point[i++] = 0;
    if (i == point.size())
      break;
    ++point[i];
  }
  fr.cost = cf;
}

} // namespace

Analysis analyze(const hcir::HCProgram& p, const energy::CostMap& costs,
                 const AnalysisOptions& opts) {
  Analysis a;
  a.system = extract_recurrences(p, costs);
  Solver(p, a).run();

  for (const auto& f : p.functions) {
    FunctionReport fr;
    fr.function = f.name;
    fr.entry = f.entry;
    auto eq = a.system.preds.find(f.entry);
    if (eq == a.system.preds.end()) {
      fr.reason = "no equations for " + f.entry;
      a.functions.push_back(fr);
      continue;
    }
    for (const auto& v : eq->second.params)
      if (eq->second.relevant.count(v))
        fr.params.push_back(v);
    auto it = a.resolved.find(f.entry);
    CostExpr e = it == a.resolved.end() ? CostExpr::unknown("cost of " + f.entry + " unresolved")
                                        : simplify(it->second);
    switch (e.kind()) {
    case CostExpr::Kind::Unknown:
      fr.reason = e.reason();
      break;
    case CostExpr::Kind::Cond:
      fr.reason = "cost is piecewise: " + e.to_string();
      break;
    case CostExpr::Kind::Leaf:
      if (e.form().has_opaque() || !e.pending().empty())
        fr.reason = "cost still refers to unsolved predicates: " + e.to_string();
      else
        gate(a.system, fr, e.form(), opts);
      break;
    }
    a.functions.push_back(fr);
  }
  return a;
}

namespace {

std::string call_text(const EquationSystem& sys, const PendingCall& c) {
  std::string out = c.pred + "(";
  for (std::size_t j = 0; j < c.args.size(); ++j)
    out += (j ? ", " : "") + (sys.relevant_at(c.pred, j) ? c.args[j].to_string() : "_");
  return out + ")";
}

} // namespace

std::string print_equations(const EquationSystem& sys, const std::string& pred) {
  auto it = sys.preds.find(pred);
  if (it == sys.preds.end())
    return {};
  const PredEquations& eq = it->second;
  std::ostringstream out;
  std::string head = pred + "(";
  for (std::size_t j = 0; j < eq.params.size(); ++j)
    head += (j ? ", " : "") + (eq.relevant.count(eq.params[j]) ? eq.params[j] : "_");
  head += ")";
  for (const auto& g : eq.equations) {
    out << head << " = ";
    if (g.cost.kind() == CostExpr::Kind::Unknown) {
      out << "unknown(" << g.cost.reason() << ")";
    } else {
      std::string rhs;
      if (!g.cost.form().is_zero() || g.cost.pending().empty())
        rhs = g.cost.form().to_string();
      for (const auto& c : g.cost.pending())
        rhs += (rhs.empty() ? "" : " + ") + call_text(sys, c);
      out << rhs;
    }
    if (!g.guard.empty()) {
      out << "  if ";
      for (std::size_t i = 0; i < g.guard.size(); ++i)
        out << (i ? ", " : "") << g.guard[i].to_string();
    }
    out << "\n";
  }
  return out.str();
}

std::string dump_recurrences(const Analysis& a) {
  const EquationSystem& sys = a.system;
  std::ostringstream out;
  out << "% equations\n";
  for (const auto& scc : sys.graph.sccs)
    for (const auto& name : scc)
      out << print_equations(sys, name);
  out << "% recurrences\n";
  for (const auto& h : a.headers) {
    if (h.ranking) {
      out << h.pred << ": ranking " << h.ranking->symbol << ", decrement";
      for (long d : h.ranking->decrements)
        out << " " << d;
      out << "\n";
    }
    if (h.recurrence)
      out << h.recurrence->to_string() << "\n";
    if (h.solution)
      out << "solution: " << h.pred << "(" << h.recurrence->var
          << ") = " << h.solution->form.to_string() << "\n";
    else
      out << "unsolved " << h.pred << ": " << h.failure << "\n";
  }
  out << "% functions\n";
  for (const auto& f : a.functions) {
    out << f.function << "(";
    for (std::size_t i = 0; i < f.params.size(); ++i)
      out << (i ? ", " : "") << f.params[i];
    out << ") = " << (f.cost ? f.cost->to_string() : "N/A  (" + f.reason + ")") << "\n";
  }
  return out.str();
}

} // namespace irenergy::analysis
