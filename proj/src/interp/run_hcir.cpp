#include "irenergy/interp/run.hpp"

#include "irenergy/support/error.hpp"

namespace irenergy::interp {

namespace {

using hcir::Clause;
using hcir::Literal;
using hcir::Term;

using Env = std::map<std::string, ConcreteValue>;

[[noreturn]] void fail(const std::string& msg) { throw Error("interp", msg); }

bool is_number(const std::string& s) {
  std::size_t i = s[0] == '-' ? 1 : 0;
  return i < s.size() && s.find_first_not_of("0123456789", i) == std::string::npos;
}

class HcMachine {
public:
  HcMachine(const hcir::HCProgram& p, const std::vector<Rational>& costs, const RunOptions& opts)
      : p_(p), costs_(costs), opts_(opts) {
    if (costs.size() != p.clauses.size())
      fail("cost map has " + std::to_string(costs.size()) + " entries for " +
           std::to_string(p.clauses.size()) + " clauses");
    for (std::size_t i = 0; i < p.clauses.size(); ++i)
      by_pred_[p.clauses[i].pred].push_back(i);
  }

  PredRun run(const std::string& pred, const std::vector<ConcreteValue>& args) {
    std::vector<ConcreteValue> outputs;
    if (const auto* sig = p_.find_pred(pred); sig && sig->kind == hcir::PredKind::External) {
      outputs = external(*sig);
    } else {
      push(pred, args);
      outputs = drive();
    }
    return {std::move(outputs), std::move(out_)};
  }

private:
  struct Frame {
    std::size_t clause;
    Env env;
    std::size_t pc;
  };

  const hcir::HCProgram& p_;
  const std::vector<Rational>& costs_;
  const RunOptions& opts_;
  std::map<std::string, std::vector<std::size_t>> by_pred_;
  std::vector<Frame> stack_;
  CostedRun out_;

  void step() {
    if (++out_.steps > opts_.step_limit)
      fail("nontermination suspected (step limit " + std::to_string(opts_.step_limit) +
           " exceeded)");
  }

  static const ConcreteValue& lookup(const Env& env, const Term& t, ConcreteValue& scratch) {
    if (!t.is_var) {
      scratch = ConcreteValue::of(t.value);
      return scratch;
    }
    auto it = env.find(t.var);
    if (it == env.end())
      fail("unbound variable " + t.var);
    return it->second;
  }

  static ConcreteValue get(const Env& env, const Term& t) {
    ConcreteValue scratch;
    return lookup(env, t, scratch);
  }

  static std::int64_t get_int(const Env& env, const Term& t) {
    ConcreteValue scratch;
    const auto& v = lookup(env, t, scratch);
    if (!v.is_int())
      fail("expected an integer for " + hcir::to_string(t));
    return v.integer;
  }

  static void bind(Env& env, const Term& t, ConcreteValue v) {
    if (!t.is_var) {
      if (!v.is_int() || v.integer != t.value)
        fail("output " + to_string(v) + " does not match constant " + std::to_string(t.value));
      return;
    }
    auto [it, fresh] = env.emplace(t.var, v);
    if (!fresh && !(it->second == v))
      fail("variable " + t.var + " bound twice to different values");
  }

  static bool test(const Env& env, const Literal& l) {
    if (l.kind == Literal::Kind::Guard)
      return get_int(env, l.args[0]) == l.args[1].value;
    return hcir::compare(l.op, get_int(env, l.args[0]), get_int(env, l.args[1]));
  }

  std::size_t inputs_of(const std::string& pred, std::size_t arity) const {
    if (const auto* sig = p_.find_pred(pred))
      return sig->inputs;
    return arity;
  }

  // Selects the first clause whose head matches and whose leading tests hold.
  void push(const std::string& pred, const std::vector<ConcreteValue>& args) {
    auto it = by_pred_.find(pred);
    if (it == by_pred_.end())
      fail("no clauses for predicate " + pred);
    for (std::size_t ci : it->second) {
      const Clause& c = p_.clauses[ci];
      std::size_t inputs = inputs_of(pred, c.head.size());
      if (args.size() != inputs)
        fail(pred + " called with " + std::to_string(args.size()) + " inputs, expects " +
             std::to_string(inputs));
      Env env;
      bool ok = true;
      for (std::size_t k = 0; k < inputs && ok; ++k) {
        const std::string& h = c.head[k];
        if (is_number(h)) {
          ok = args[k].is_int() && args[k].integer == std::stoll(h);
          continue;
        }
        auto [slot, fresh] = env.emplace(h, args[k]);
        ok = fresh || slot->second == args[k];
      }
      std::size_t pc = 0;
      while (ok && pc < c.body.size() && c.body[pc].is_test()) {
        step();
        ok = test(env, c.body[pc]);
        ++pc;
      }
      if (!ok)
        continue;
      out_.cost += costs_[ci];
      if (c.origin) {
        ++out_.visits[*c.origin];
        if (opts_.trace)
          out_.trace.push_back(*c.origin);
      }
      stack_.push_back({ci, std::move(env), pc});
      return;
    }
    std::string shown;
    for (std::size_t k = 0; k < args.size(); ++k)
      shown += (k ? ", " : "") + to_string(args[k]);
    fail("no clause of " + pred + " applies to (" + shown + ")");
  }

  std::vector<ConcreteValue> external(const hcir::PredSig& sig) {
    const auto* a = p_.find_assertion(sig.name, sig.arity);
    if (!a || !a->energy)
      fail("no energy assertion for external predicate " + sig.name);
    out_.cost += *a->energy;
    out_.external_cost += *a->energy;
    return std::vector<ConcreteValue>(sig.arity - sig.inputs, ConcreteValue::of(0));
  }

  static ConcreteValue& element(ConcreteValue& agg, std::int64_t idx) {
    if (!agg.is_aggregate())
      fail("indexing into a scalar");
    if (idx < 0 || static_cast<std::size_t>(idx) >= agg.items.size())
      fail("index " + std::to_string(idx) + " out of range (size " +
           std::to_string(agg.items.size()) + ")");
    return agg.items[static_cast<std::size_t>(idx)];
  }

  void builtin(Env& env, const Literal& l) {
    const auto& a = l.args;
    const std::string& n = l.name;
    if (n == "add")
      bind(env, a[2], ConcreteValue::of(checked_add(get_int(env, a[0]), get_int(env, a[1]))));
    else if (n == "sub")
      bind(env, a[2], ConcreteValue::of(checked_sub(get_int(env, a[0]), get_int(env, a[1]))));
    else if (n == "mul")
      bind(env, a[2], ConcreteValue::of(checked_mul(get_int(env, a[0]), get_int(env, a[1]))));
    else if (n == "zext")
      bind(env, a[2],
           ConcreteValue::of(zext_value(get_int(env, a[0]),
                                        static_cast<unsigned>(get_int(env, a[1])))));
    else if (n == "trunc")
      bind(env, a[2],
           ConcreteValue::of(trunc_value(get_int(env, a[0]),
                                         static_cast<unsigned>(get_int(env, a[1])))));
    else if (n == "ret")
      bind(env, a[1], get(env, a[0]));
    else if (n == "nth") {
      ConcreteValue agg = get(env, a[1]);
      bind(env, a[2], element(agg, get_int(env, a[0])));
    } else if (n == "set_nth") {
      ConcreteValue agg = get(env, a[1]);
      element(agg, get_int(env, a[0])) = get(env, a[2]);
      bind(env, a[3], std::move(agg));
    } else if (n == "mk_list") {
      auto len = get_int(env, a[0]);
      if (len < 0)
        fail("negative list length");
      bind(env, a[1],
           ConcreteValue::list(
               std::vector<ConcreteValue>(static_cast<std::size_t>(len), ConcreteValue::of(0))));
    } else {
      fail("unknown builtin " + n);
    }
  }

  std::vector<ConcreteValue> outputs_of(const Frame& f) const {
    const Clause& c = p_.clauses[f.clause];
    std::vector<ConcreteValue> out;
    for (std::size_t k = inputs_of(c.pred, c.head.size()); k < c.head.size(); ++k) {
      const std::string& h = c.head[k];
      if (is_number(h)) {
        out.push_back(ConcreteValue::of(std::stoll(h)));
        continue;
      }
      auto it = f.env.find(h);
      if (it == f.env.end())
        fail("output " + h + " of " + c.pred + " is never bound");
      out.push_back(it->second);
    }
    return out;
  }

  std::vector<ConcreteValue> drive() {
    std::size_t base = stack_.size() - 1;
    while (true) {
      Frame& top = stack_.back();
      const Clause& c = p_.clauses[top.clause];
      if (top.pc == c.body.size()) {
        auto outs = outputs_of(top);
        stack_.pop_back();
        if (stack_.size() == base)
          return outs;
        Frame& caller = stack_.back();
        const Literal& l = p_.clauses[caller.clause].body[caller.pc];
        std::size_t inputs = l.args.size() - outs.size();
        for (std::size_t k = 0; k < outs.size(); ++k)
          bind(caller.env, l.args[inputs + k], std::move(outs[k]));
        ++caller.pc;
        continue;
      }
      step();
      const Literal& l = c.body[top.pc];
      switch (l.kind) {
      case Literal::Kind::Guard:
      case Literal::Kind::Compare:
        if (!test(top.env, l))
          fail("test " + std::to_string(top.pc) + " of a clause of " + c.pred +
               " failed after the clause committed");
        ++top.pc;
        break;
      case Literal::Kind::Builtin:
        builtin(top.env, l);
        ++top.pc;
        break;
      case Literal::Kind::Call: {
        const auto* sig = p_.find_pred(l.name);
        if (!sig)
          fail("call to unknown predicate " + l.name);
        if (sig->arity != l.args.size())
          fail("call to " + l.name + " with " + std::to_string(l.args.size()) + " arguments");
        if (sig->kind == hcir::PredKind::External) {
          auto outs = external(*sig);
          for (std::size_t k = 0; k < outs.size(); ++k)
            bind(top.env, l.args[sig->inputs + k], outs[k]);
          ++top.pc;
          break;
        }
        std::vector<ConcreteValue> args;
        for (std::size_t k = 0; k < sig->inputs; ++k)
          args.push_back(get(top.env, l.args[k]));
        push(l.name, args);  // may invalidate `top`
        break;
      }
      }
    }
  }
};

} // namespace

PredRun run_hcir(const hcir::HCProgram& p, const std::string& pred,
                 const std::vector<ConcreteValue>& args, const std::vector<Rational>& costs,
                 const RunOptions& opts) {
  return HcMachine(p, costs, opts).run(pred, args);
}

CostedRun run_hcir_function(const hcir::HCProgram& p, const std::string& fn,
                            const std::vector<ConcreteValue>& args,
                            const std::vector<Rational>& costs, const RunOptions& opts) {
  const auto* info = p.find_function(fn);
  if (!info)
    throw Error("interp", "unknown function " + fn);
  PredRun r = run_hcir(p, info->entry, args, costs, opts);
  std::size_t expected = info->copy_out.size() + (info->returns_value ? 1 : 0);
  if (r.outputs.size() != expected)
    throw Error("interp", info->entry + " produced " + std::to_string(r.outputs.size()) +
                              " outputs, expected " + std::to_string(expected));
  for (std::size_t k = 0; k < info->copy_out.size(); ++k)
    r.run.pointers[info->copy_out[k]] = r.outputs[k];
  if (info->returns_value)
    r.run.result = r.outputs.back();
  return std::move(r.run);
}

} // namespace irenergy::interp
