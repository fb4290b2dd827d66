#include "irenergy/hcir/translate.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <limits>
#include <set>

namespace irenergy::hcir {

namespace {

using ir::Opcode;

std::string sanitize_var(const std::string& reg) {
  std::string out;
  for (char c : reg)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0])))
    out = "R" + out;
  return out;
}

std::string test_pred_name(ir::CmpPred p) { return "icmp_" + ir::cmp_name(p); }

std::vector<Clause> test_pred_clauses(ir::CmpPred p) {
  std::string name = test_pred_name(p);
  CompareOp op = compare_op(p);
  std::vector<Clause> out;
  for (int value : {1, 0}) {
    Clause c;
    c.pred = name;
    c.head = {"X", "Y", std::to_string(value)};
    c.kind = ClauseKind::Test;
    c.body.push_back(Literal::test(value ? op : negate(op), Term::v("X"), Term::v("Y")));
    out.push_back(std::move(c));
  }
  return out;
}

const std::vector<ir::CmpPred> kAllPreds = {ir::CmpPred::Eq,  ir::CmpPred::Ne,
                                            ir::CmpPred::Slt, ir::CmpPred::Sle,
                                            ir::CmpPred::Sgt, ir::CmpPred::Sge};

} // namespace

struct Translator::Impl {
  const ir::Module& module;
  TypeNamer namer;
  std::map<std::string, std::set<std::size_t>> mutated;  // function -> param indices
  std::map<std::string, std::map<std::string, std::string>> block_pred;  // fn -> label -> pred
  std::map<std::string, std::set<std::string>> inlined;                  // fn -> labels
  std::set<std::string> taken;  // every predicate name handed out
  std::set<std::string> tests_emitted;
  std::vector<Clause> clauses;
  std::map<std::string, PredSig> preds;
  std::vector<FunctionInfo> functions;

  explicit Impl(const ir::Module& m) : module(m), namer(&m) {
    compute_mutated();
    assign_names();
  }

  static bool single_edge_target(const ir::Function& f, const std::string& label,
                                 const std::map<std::string, std::vector<std::string>>& preds) {
    if (f.blocks.empty() || f.blocks.front().label == label)
      return false;
    auto it = preds.find(label);
    if (it == preds.end() || it->second.size() != 1)
      return false;
    const ir::Block* from = f.find_block(it->second.front());
    const ir::Instruction* t = from ? from->terminator() : nullptr;
    if (!t || t->op != Opcode::BrCond)
      return false;
    int edges = 0;
    for (const auto& target : t->targets)
      edges += target.label == label;
    return edges == 1;
  }

  void compute_mutated() {
    auto param_index = [](const ir::Function& f, const std::string& reg) -> long {
      for (std::size_t i = 0; i < f.params.size(); ++i)
        if (f.params[i].name == reg && f.params[i].type->is_pointer())
          return static_cast<long>(i);
      return -1;
    };
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& f : module.functions) {
        std::map<std::string, const ir::Instruction*> geps;
        for (const auto& b : f.blocks)
          for (const auto& in : b.instructions)
            if (in.op == Opcode::GetElementPtr && in.result)
              geps[*in.result] = &in;
        auto& set = mutated[f.name];
        auto mark = [&](const std::string& reg) {
          long k = param_index(f, reg);
          if (k >= 0 && set.insert(static_cast<std::size_t>(k)).second)
            changed = true;
        };
        for (const auto& b : f.blocks)
          for (const auto& in : b.instructions) {
            if (in.op == Opcode::Store && in.operands.size() == 2 &&
                in.operands[1].is_register()) {
              auto it = geps.find(in.operands[1].name);
              if (it != geps.end() && it->second->operands[0].is_register())
                mark(it->second->operands[0].name);
              else
                mark(in.operands[1].name);
            }
            if (in.op == Opcode::Call && module.find_function(in.callee)) {
              for (std::size_t k : mutated[in.callee])
                if (k < in.operands.size() && in.operands[k].is_register())
                  mark(in.operands[k].name);
            }
          }
      }
    }
  }

  void assign_names() {
    static const std::set<std::string> reserved = [] {
      std::set<std::string> r = {"add", "sub", "mul", "zext", "trunc", "nth",
                                 "set_nth", "mk_list", "ret"};
      for (auto p : kAllPreds)
        r.insert(test_pred_name(p));
      return r;
    }();
    std::map<std::string, int> label_uses;
    for (const auto& f : module.functions) {
      auto preds = ir::predecessors(f);
      for (const auto& b : f.blocks) {
        if (single_edge_target(f, b.label, preds))
          inlined[f.name].insert(b.label);
        else
          ++label_uses[b.label];
      }
    }
    for (const auto& d : module.declarations) {
      taken.insert(d.name);
      PredSig sig;
      sig.name = d.name;
      sig.inputs = d.param_types.size();
      sig.arity = sig.inputs + (d.ret_type->kind == ir::Type::Kind::Void ? 0 : 1);
      for (const auto& t : d.param_types)
        sig.types.push_back(translate_type(t, namer));
      if (sig.arity > sig.inputs)
        sig.types.push_back(translate_type(d.ret_type, namer));
      sig.kind = PredKind::External;
      sig.function = d.name;
      preds[d.name] = sig;
    }
    for (auto p : kAllPreds)
      taken.insert(test_pred_name(p));
    for (const auto& f : module.functions)
      for (const auto& b : f.blocks) {
        if (inlined[f.name].count(b.label))
          continue;
        std::string name = sanitize_var(b.label);
        if (std::isupper(static_cast<unsigned char>(name[0])))
          name = "b_" + name;
        if (label_uses[b.label] > 1 || reserved.count(name) || taken.count(name))
          name = sanitize_var(f.name) + "__" + name;
        name = unique_pred(name);
        block_pred[f.name][b.label] = name;
      }
  }

  std::string unique_pred(const std::string& base) {
    std::string name = base;
    for (int k = 2; taken.count(name); ++k)
      name = base + "_" + std::to_string(k);
    taken.insert(name);
    return name;
  }

  void emit_test(ir::CmpPred p, std::vector<Clause>& out) {
    std::string name = test_pred_name(p);
    if (tests_emitted.count(name))
      return;
    tests_emitted.insert(name);
    PredSig sig{name, 3, 2, {RegularType::num(), RegularType::num(), RegularType::num()},
                PredKind::Test, {}};
    preds[name] = sig;
    for (auto& c : test_pred_clauses(p))
      out.push_back(std::move(c));
  }

  std::vector<Clause> translate(const ir::Function& f, const ParamSets& p,
                                const ir::SuccessorMap& cfg);
};

namespace {

// Per-function translation state.
struct FnCtx {
  Translator::Impl& tr;
  const ir::Function& f;
  const ParamSets& ps;
  const ir::SuccessorMap& cfg;

  std::map<std::string, std::string> var;  // register -> HC variable
  std::set<std::string> used;
  std::map<std::string, ir::TypePtr> types;
  std::map<std::string, long> order_key;
  std::map<std::string, std::vector<std::string>> inputs;  // non-inlined label -> registers
  std::vector<std::string> outs;                           // output head variables
  std::vector<RegularType> out_types;
  std::set<std::string> copy_out_regs;
  std::vector<std::string> copy_out_vars;  // parallel to the copy-out registers in param order
  std::vector<std::string> copy_out_order;
  std::map<std::string, const ir::Instruction*> fused;  // gep result -> gep
  std::set<std::string> pointer_bases;                  // params and alloca results
  std::string ret_var;

  struct Job {
    std::string name;
    std::string source;
    std::string cond_var;
    std::vector<std::string> needs;
  };
  std::deque<Job> jobs;
  std::vector<ir::CmpPred> tests_used;

  FnCtx(Translator::Impl& t, const ir::Function& fn, const ParamSets& p,
        const ir::SuccessorMap& c)
      : tr(t), f(fn), ps(p), cfg(c) {
    collect_names();
    compute_fusion();
    compute_inputs();
  }

  std::string fresh(const std::string& base) {
    std::string name = base;
    for (int k = 1; used.count(name); ++k)
      name = base + "_" + std::to_string(k);
    used.insert(name);
    return name;
  }

  void note(const std::string& reg, long& counter) {
    if (!order_key.count(reg))
      order_key[reg] = counter++;
  }

  void collect_names() {
    std::vector<std::pair<std::string, ir::TypePtr>> regs;
    for (const auto& prm : f.params)
      regs.push_back({prm.name, prm.type});
    for (const auto& b : f.blocks) {
      for (const auto& prm : b.params)
        regs.push_back({prm.name, prm.type});
      for (const auto& in : b.instructions)
        if (in.result)
          regs.push_back({*in.result, in.type});
    }
    for (const auto& [reg, type] : regs) {
      types[reg] = type;
      if (var.count(reg))
        continue;
      var[reg] = fresh(sanitize_var(reg));
    }
    long counter = 0;
    for (const auto& b : f.blocks) {
      for (const auto& prm : b.params)
        note(prm.name, counter);
      for (const auto& in : b.instructions) {
        if (in.result)
          note(*in.result, counter);
        for (const auto& v : in.operands)
          if (v.is_register())
            note(v.name, counter);
        for (const auto& t : in.targets)
          for (const auto& a : t.args)
            if (a.is_register())
              note(a.name, counter);
      }
    }
    for (const auto& prm : f.params)
      if (!order_key.count(prm.name))
        order_key[prm.name] = counter++;
    for (const auto& prm : f.params)
      if (prm.type->is_pointer())
        pointer_bases.insert(prm.name);
    for (const auto& b : f.blocks)
      for (const auto& in : b.instructions)
        if (in.op == Opcode::Alloca && in.result)
          pointer_bases.insert(*in.result);

    const auto& mutated = tr.mutated[f.name];
    for (std::size_t k = 0; k < f.params.size(); ++k)
      if (mutated.count(k)) {
        copy_out_regs.insert(f.params[k].name);
        copy_out_order.push_back(f.params[k].name);
        std::string v = fresh(var[f.params[k].name] + "_out");
        copy_out_vars.push_back(v);
        outs.push_back(v);
        out_types.push_back(translate_type(f.params[k].type, tr.namer));
      }
    if (f.ret_type && f.ret_type->kind != ir::Type::Kind::Void) {
      ret_var = fresh("Ret");
      outs.push_back(ret_var);
      out_types.push_back(translate_type(f.ret_type, tr.namer));
    }
  }

  void compute_fusion() {
    std::map<std::string, int> uses;
    for (const auto& b : f.blocks)
      for (const auto& in : b.instructions) {
        for (const auto& v : in.operands)
          if (v.is_register())
            ++uses[v.name];
        for (const auto& t : in.targets)
          for (const auto& a : t.args)
            if (a.is_register())
              ++uses[a.name];
      }
    for (const auto& b : f.blocks)
      for (std::size_t i = 0; i < b.instructions.size(); ++i) {
        const auto& g = b.instructions[i];
        if (g.op != Opcode::GetElementPtr || !g.result || uses[*g.result] != 1)
          continue;
        for (std::size_t j = i + 1; j < b.instructions.size(); ++j) {
          const auto& u = b.instructions[j];
          bool load = u.op == Opcode::Load && u.operands.size() == 1 &&
                      u.operands[0] == ir::Value::reg(*g.result);
          bool store = u.op == Opcode::Store && u.operands.size() == 2 &&
                       u.operands[1] == ir::Value::reg(*g.result);
          if (load || store) {
            fused[*g.result] = &g;
            break;
          }
        }
      }
  }

  std::vector<std::string> sorted(const std::set<std::string>& regs) const {
    std::vector<std::string> out(regs.begin(), regs.end());
    std::sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
      auto ka = order_key.count(a) ? order_key.at(a) : std::numeric_limits<long>::max();
      auto kb = order_key.count(b) ? order_key.at(b) : std::numeric_limits<long>::max();
      return ka != kb ? ka < kb : a < b;
    });
    return out;
  }

  bool is_inlined(const std::string& label) const { return tr.inlined[f.name].count(label) > 0; }

  std::set<std::string> block_inputs(const std::string& label) const {
    std::set<std::string> in = ps.at(label).params_in;
    in.insert(copy_out_regs.begin(), copy_out_regs.end());
    return in;
  }

  void compute_inputs() {
    for (std::size_t i = 0; i < f.blocks.size(); ++i) {
      const auto& b = f.blocks[i];
      if (is_inlined(b.label))
        continue;
      if (i == 0) {
        auto& in = inputs[b.label];
        for (const auto& prm : f.params)
          in.push_back(prm.name);
      } else {
        inputs[b.label] = sorted(block_inputs(b.label));
      }
    }
  }

  RegularType reg_type(const std::string& reg) {
    auto it = types.find(reg);
    if (it == types.end())
      throw Error("translate", "no type for %" + reg + " in @" + f.name);
    return translate_type(it->second, tr.namer);
  }

  const std::string& pred_of(const std::string& label) { return tr.block_pred[f.name][label]; }

  void register_sig(const std::string& name, const std::vector<std::string>& head_regs,
                    PredKind kind, const std::vector<RegularType>& leading = {}) {
    PredSig sig;
    sig.name = name;
    sig.kind = kind;
    sig.function = f.name;
    sig.types = leading;
    for (const auto& r : head_regs)
      sig.types.push_back(reg_type(r));
    sig.inputs = sig.types.size();
    sig.types.insert(sig.types.end(), out_types.begin(), out_types.end());
    sig.arity = sig.types.size();
    tr.preds[name] = sig;
  }

  // Clause under construction.
  struct Builder {
    FnCtx& ctx;
    Clause clause;
    std::map<std::string, Term> env;

    Term term(const ir::Value& v) const {
      if (!v.is_register())
        return Term::c(v.constant);
      auto it = env.find(v.name);
      if (it != env.end())
        return it->second;
      return Term::v(ctx.var.at(v.name));
    }
    Term term(const std::string& reg) const { return term(ir::Value::reg(reg)); }
    void add(Literal l) { clause.body.push_back(std::move(l)); }
  };

  std::string result_var(const ir::Instruction& in) { return var.at(*in.result); }

  void element_chain(Builder& bld, const ir::Instruction& gep, std::vector<Term>& indices,
                     std::string& base) {
    if (!gep.operands[0].is_register())
      throw Error("translate", "getelementptr on a constant base", gep.loc);
    base = gep.operands[0].name;
    for (std::size_t k = 1; k < gep.operands.size(); ++k)
      indices.push_back(bld.term(gep.operands[k]));
  }

  void translate_body(Builder& bld, const ir::Block& b) {
    for (const auto& in : b.instructions) {
      if (ir::is_terminator(in.op))
        break;
      switch (in.op) {
      case Opcode::Add:
      case Opcode::Sub:
      case Opcode::Mul:
        bld.add(Literal::builtin(ir::opcode_name(in.op),
                                 {bld.term(in.operands[0]), bld.term(in.operands[1]),
                                  Term::v(result_var(in))},
                                 {ir::cost_key(in.op)}));
        break;
      case Opcode::ICmp:
        tests_used.push_back(in.pred);
        bld.add(Literal::call(test_pred_name(in.pred),
                              {bld.term(in.operands[0]), bld.term(in.operands[1]),
                               Term::v(result_var(in))},
                              {ir::cost_key(in.op, in.pred)}));
        break;
      case Opcode::ZExt:
      case Opcode::Trunc: {
        unsigned width = in.op == Opcode::ZExt ? in.operand_types[0]->width : in.type->width;
        bld.add(Literal::builtin(ir::opcode_name(in.op),
                                 {bld.term(in.operands[0]), Term::c(width),
                                  Term::v(result_var(in))},
                                 {ir::cost_key(in.op)}));
        break;
      }
      case Opcode::Alloca: {
        const auto& t = in.elem_type;
        if (t->kind != ir::Type::Kind::Array || !t->length || !t->element->is_integer())
          throw Error("translate",
                      "alloca of " + ir::to_string(t) + " is unsupported (integer arrays only)",
                      in.loc);
        bld.add(Literal::builtin("mk_list",
                                 {Term::c(static_cast<std::int64_t>(*t->length)),
                                  Term::v(result_var(in))},
                                 {ir::cost_key(in.op)}));
        break;
      }
      case Opcode::GetElementPtr:
        if (!fused.count(*in.result))
          throw Error("translate",
                      "getelementptr %" + *in.result +
                          " is not followed by a single load or store of its address",
                      in.loc);
        break;
      case Opcode::Load: {
        auto it = in.operands[0].is_register() ? fused.find(in.operands[0].name) : fused.end();
        if (it == fused.end())
          throw Error("translate", "load through a non-element pointer", in.loc);
        std::vector<Term> idx;
        std::string base;
        element_chain(bld, *it->second, idx, base);
        Term cur = bld.term(base);
        for (std::size_t k = 0; k < idx.size(); ++k) {
          bool last = k + 1 == idx.size();
          Term out = last ? Term::v(result_var(in)) : Term::v(fresh(var.at(base) + "_e"));
          std::vector<std::string> origins;
          if (k == 0)
            origins.push_back(ir::cost_key(Opcode::GetElementPtr));
          if (last)
            origins.push_back(ir::cost_key(Opcode::Load));
          bld.add(Literal::builtin("nth", {idx[k], cur, out}, origins));
          cur = out;
        }
        break;
      }
      case Opcode::Store: {
        auto it = in.operands[1].is_register() ? fused.find(in.operands[1].name) : fused.end();
        if (it == fused.end())
          throw Error("translate", "store through a non-element pointer", in.loc);
        std::vector<Term> idx;
        std::string base;
        element_chain(bld, *it->second, idx, base);
        if (!pointer_bases.count(base))
          throw Error("translate", "store through merged pointer %" + base + " is unsupported",
                      in.loc);
        // Walk down to the innermost aggregate, update it, and rebuild outwards.
        std::vector<Term> levels = {bld.term(base)};
        std::vector<std::vector<std::string>> origins(2 * idx.size() - 1);
        origins.front().push_back(ir::cost_key(Opcode::GetElementPtr));
        origins.back().push_back(ir::cost_key(Opcode::Store));
        std::size_t lit = 0;
        for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
          Term inner = Term::v(fresh(var.at(base) + "_e"));
          bld.add(Literal::builtin("nth", {idx[k], levels.back(), inner}, origins[lit++]));
          levels.push_back(inner);
        }
        Term value = bld.term(in.operands[0]);
        for (std::size_t k = idx.size(); k-- > 0;) {
          Term updated = Term::v(fresh(k == 0 ? var.at(base) : var.at(base) + "_u"));
          bld.add(Literal::builtin("set_nth", {idx[k], levels[k], value, updated}, origins[lit++]));
          value = updated;
        }
        bld.env[base] = value;
        break;
      }
      case Opcode::Call: {
        std::vector<Term> args;
        for (const auto& v : in.operands)
          args.push_back(bld.term(v));
        std::string pred;
        if (const ir::Function* g = tr.module.find_function(in.callee)) {
          pred = tr.block_pred[g->name][g->blocks.front().label];
          for (std::size_t k : tr.mutated[g->name]) {
            const auto& v = in.operands[k];
            if (!v.is_register())
              throw Error("translate", "constant passed for written pointer argument", in.loc);
            Term updated = Term::v(fresh(var.at(v.name)));
            args.push_back(updated);
            bld.env[v.name] = updated;
          }
        } else {
          pred = in.callee;
        }
        if (in.result)
          args.push_back(Term::v(result_var(in)));
        bld.add(Literal::call(pred, std::move(args), {ir::cost_key(in.op)}));
        break;
      }
      case Opcode::Phi:
        throw Error("translate", "phi left in block " + b.label, in.loc);
      default:
        throw Error("translate", "unsupported instruction " + ir::opcode_name(in.op), in.loc);
      }
    }
  }

  std::vector<Term> out_terms() const {
    std::vector<Term> out;
    for (const auto& o : outs)
      out.push_back(Term::v(o));
    return out;
  }

  Literal target_call(Builder& bld, const ir::BranchTarget& t) {
    const ir::Block& tb = *f.find_block(t.label);
    std::vector<Term> args;
    for (const auto& r : inputs.at(t.label)) {
      bool is_param = false;
      for (std::size_t i = 0; i < tb.params.size(); ++i)
        if (tb.params[i].name == r) {
          args.push_back(bld.term(t.args.at(i)));
          is_param = true;
        }
      if (!is_param)
        args.push_back(bld.term(r));
    }
    for (auto& o : out_terms())
      args.push_back(o);
    return Literal::call(pred_of(t.label), std::move(args));
  }

  // Registers the dispatch clauses for `target` need from the branching block.
  std::set<std::string> target_needs(const ir::BranchTarget& t) {
    const ir::Block& tb = *f.find_block(t.label);
    std::set<std::string> params, needs;
    for (const auto& prm : tb.params)
      params.insert(prm.name);
    std::set<std::string> in = is_inlined(t.label)
                                   ? block_inputs(t.label)
                                   : std::set<std::string>(inputs.at(t.label).begin(),
                                                           inputs.at(t.label).end());
    for (const auto& r : in)
      if (!params.count(r))
        needs.insert(r);
    for (const auto& a : t.args)
      if (a.is_register())
        needs.insert(a.name);
    return needs;
  }

  void terminate(Builder& bld, const ir::Block& b) {
    const ir::Instruction* t = b.terminator();
    if (!t)
      throw Error("translate", "block " + b.label + " has no terminator", b.loc);
    for (std::size_t i = 0; i < b.params.size(); ++i)
      bld.clause.absorbed.push_back(ir::cost_key(Opcode::Phi));
    bld.clause.absorbed.push_back(ir::cost_key(t->op));
    switch (t->op) {
    case Opcode::Ret:
      for (std::size_t k = 0; k < copy_out_order.size(); ++k)
        bld.add(Literal::builtin("ret",
                                 {bld.term(copy_out_order[k]), Term::v(copy_out_vars[k])}));
      if (!ret_var.empty()) {
        if (t->operands.empty())
          throw Error("translate", "ret without value in non-void function", t->loc);
        bld.add(Literal::builtin("ret", {bld.term(t->operands[0]), Term::v(ret_var)}));
      }
      break;
    case Opcode::Br:
      bld.add(target_call(bld, t->targets[0]));
      break;
    case Opcode::BrCond: {
      Job job;
      job.source = b.label;
      job.name = tr.unique_pred(sanitize_var(t->targets[0].label) + "_" +
                                sanitize_var(t->targets[1].label));
      const ir::Value& c = t->operands[0];
      job.cond_var = c.is_register() ? var.at(c.name) : fresh("Cond");
      std::set<std::string> needs = target_needs(t->targets[0]);
      auto more = target_needs(t->targets[1]);
      needs.insert(more.begin(), more.end());
      if (c.is_register())
        needs.erase(c.name);
      job.needs = sorted(needs);
      std::vector<Term> args = {bld.term(c)};
      for (const auto& r : job.needs)
        args.push_back(bld.term(r));
      for (auto& o : out_terms())
        args.push_back(o);
      bld.add(Literal::call(job.name, std::move(args)));
      register_sig(job.name, job.needs, PredKind::Dispatch, {RegularType::num()});
      jobs.push_back(std::move(job));
      break;
    }
    default:
      break;
    }
  }

  std::vector<std::string> head_vars(const std::vector<std::string>& regs) const {
    std::vector<std::string> out;
    for (const auto& r : regs)
      out.push_back(var.at(r));
    out.insert(out.end(), outs.begin(), outs.end());
    return out;
  }

  void flush_tests(std::vector<Clause>& out) {
    for (auto p : tests_used)
      tr.emit_test(p, out);
    tests_used.clear();
  }

  void run_job(const Job& job, std::vector<Clause>& out) {
    const ir::Block& src = *f.find_block(job.source);
    const ir::Instruction& br = *src.terminator();
    for (int k = 0; k < 2; ++k) {
      Builder bld{*this, {}, {}};
      bld.clause.pred = job.name;
      bld.clause.kind = ClauseKind::Dispatch;
      bld.clause.head = {job.cond_var};
      auto rest = head_vars(job.needs);
      bld.clause.head.insert(bld.clause.head.end(), rest.begin(), rest.end());
      bld.add(Literal::guard(job.cond_var, k == 0 ? 1 : 0));
      const ir::BranchTarget& t = br.targets[static_cast<std::size_t>(k)];
      if (is_inlined(t.label)) {
        const ir::Block& tb = *f.find_block(t.label);
        for (std::size_t i = 0; i < tb.params.size(); ++i)
          bld.env[tb.params[i].name] = bld.term(t.args.at(i));
        bld.clause.origin = BlockRef{f.name, t.label};
        translate_body(bld, tb);
        terminate(bld, tb);
      } else {
        bld.add(target_call(bld, t));
      }
      out.push_back(std::move(bld.clause));
    }
    flush_tests(out);
  }

  std::vector<Clause> run() {
    std::vector<Clause> out;
    for (std::size_t i = 0; i < f.blocks.size(); ++i) {
      const ir::Block& b = f.blocks[i];
      if (is_inlined(b.label))
        continue;
      Builder bld{*this, {}, {}};
      bld.clause.pred = pred_of(b.label);
      bld.clause.kind = ClauseKind::Block;
      bld.clause.origin = BlockRef{f.name, b.label};
      bld.clause.head = head_vars(inputs.at(b.label));
      register_sig(bld.clause.pred, inputs.at(b.label), PredKind::Block);
      translate_body(bld, b);
      terminate(bld, b);
      out.push_back(std::move(bld.clause));
      flush_tests(out);
      while (!jobs.empty()) {
        Job job = jobs.front();
        jobs.pop_front();
        run_job(job, out);
      }
    }
    FunctionInfo info;
    info.name = f.name;
    info.entry = f.blocks.empty() ? "" : pred_of(f.blocks.front().label);
    for (std::size_t k = 0; k < f.params.size(); ++k) {
      info.params.push_back(var.at(f.params[k].name));
      if (copy_out_regs.count(f.params[k].name))
        info.copy_out.push_back(k);
    }
    info.returns_value = !ret_var.empty();
    tr.functions.push_back(info);
    return out;
  }
};

} // namespace

std::vector<Clause> Translator::Impl::translate(const ir::Function& f, const ParamSets& p,
                                                const ir::SuccessorMap& cfg) {
  if (!block_pred.count(f.name) && !f.blocks.empty())
    throw Error("translate", "function @" + f.name + " is not part of the module");
  FnCtx ctx(*this, f, p, cfg);
  auto out = ctx.run();
  clauses.insert(clauses.end(), out.begin(), out.end());
  return out;
}

Translator::Translator(const ir::Module& m) : impl_(std::make_unique<Impl>(m)) {}
Translator::~Translator() = default;

std::vector<Clause> Translator::translate_function(const ir::Function& phi_free,
                                                   const ParamSets& p,
                                                   const ir::SuccessorMap& cfg) {
  return impl_->translate(phi_free, p, cfg);
}

HCProgram Translator::program() const {
  HCProgram prog;
  prog.clauses = impl_->clauses;
  prog.preds = impl_->preds;
  prog.functions = impl_->functions;
  return prog;
}

HCProgram translate_module(const ir::Module& m) {
  Translator tr(m);
  for (const auto& f : m.functions) {
    ParamSets ps = infer_block_params(f);
    ir::Function g = eliminate_phi(f, ps);
    tr.translate_function(g, ps, ir::build_cfg(g));
  }
  return tr.program();
}

std::vector<Literal> translate_instruction(const ir::Instruction& in) {
  auto term = [](const ir::Value& v) {
    return v.is_register() ? Term::v(sanitize_var(v.name)) : Term::c(v.constant);
  };
  auto res = [&]() { return Term::v(sanitize_var(in.result.value_or("_"))); };
  switch (in.op) {
  case Opcode::Add:
  case Opcode::Sub:
  case Opcode::Mul:
    return {Literal::builtin(ir::opcode_name(in.op), {term(in.operands[0]), term(in.operands[1]), res()},
                             {ir::cost_key(in.op)})};
  case Opcode::ICmp:
    return {Literal::call(test_pred_name(in.pred), {term(in.operands[0]), term(in.operands[1]), res()},
                          {ir::cost_key(in.op, in.pred)})};
  case Opcode::ZExt:
    return {Literal::builtin("zext", {term(in.operands[0]), Term::c(in.operand_types[0]->width), res()},
                             {ir::cost_key(in.op)})};
  case Opcode::Trunc:
    return {Literal::builtin("trunc", {term(in.operands[0]), Term::c(in.type->width), res()},
                             {ir::cost_key(in.op)})};
  case Opcode::Alloca:
    if (in.elem_type->kind == ir::Type::Kind::Array && in.elem_type->length)
      return {Literal::builtin("mk_list",
                               {Term::c(static_cast<std::int64_t>(*in.elem_type->length)), res()},
                               {ir::cost_key(in.op)})};
    throw Error("translate", "alloca of " + ir::to_string(in.elem_type) + " is unsupported", in.loc);
  case Opcode::GetElementPtr: {
    std::vector<Literal> out;
    Term cur = term(in.operands[0]);
    for (std::size_t k = 1; k < in.operands.size(); ++k) {
      bool last = k + 1 == in.operands.size();
      Term next = last ? res() : Term::v(cur.var + "_e" + std::to_string(k));
      out.push_back(Literal::builtin("nth", {term(in.operands[k]), cur, next},
                                     k == 1 ? std::vector<std::string>{ir::cost_key(in.op)}
                                            : std::vector<std::string>{}));
      cur = next;
    }
    return out;
  }
  case Opcode::Call: {
    std::vector<Term> args;
    for (const auto& v : in.operands)
      args.push_back(term(v));
    if (in.result)
      args.push_back(res());
    return {Literal::call(in.callee, std::move(args), {ir::cost_key(in.op)})};
  }
  default:
    throw Error("translate",
                "instruction " + ir::opcode_name(in.op) + " has no stand-alone translation",
                in.loc);
  }
}

} // namespace irenergy::hcir
