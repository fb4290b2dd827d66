#include "irenergy/interp/run.hpp"

#include "irenergy/support/error.hpp"

#include <variant>

namespace irenergy::interp {

namespace {

using ir::Opcode;

struct Pointer {
  std::size_t object = 0;
  std::vector<std::int64_t> path;
};

using RegValue = std::variant<ConcreteValue, Pointer>;

constexpr int kMaxCallDepth = 10'000;

class IrMachine {
public:
  IrMachine(const ir::Module& m, const BlockCosts& costs, const ExternalCosts& external,
            const RunOptions& opts)
      : m_(m), costs_(costs), external_(external), opts_(opts) {}

  CostedRun run(const std::string& fn, const std::vector<ConcreteValue>& args) {
    const ir::Function* f = m_.find_function(fn);
    if (!f)
      throw Error("interp", "unknown function @" + fn);
    if (args.size() != f->params.size())
      throw Error("interp", "@" + fn + " expects " + std::to_string(f->params.size()) +
                                " arguments");
    std::vector<RegValue> actual;
    std::map<std::size_t, std::size_t> objects;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (f->params[i].type->is_pointer()) {
        objects[i] = heap_.size();
        heap_.push_back(args[i]);
        actual.push_back(Pointer{objects[i], {}});
      } else {
        if (!args[i].is_int())
          throw Error("interp", "argument " + std::to_string(i) + " of @" + fn +
                                    " must be an integer");
        actual.push_back(args[i]);
      }
    }
    out_.result = call(*f, actual, 0);
    for (const auto& [param, obj] : objects)
      out_.pointers[param] = heap_[obj];
    return std::move(out_);
  }

private:
  const ir::Module& m_;
  const BlockCosts& costs_;
  const ExternalCosts& external_;
  const RunOptions& opts_;
  std::vector<ConcreteValue> heap_;
  CostedRun out_;

  [[noreturn]] static void fail(const std::string& msg, Location loc = {}) {
    throw Error("interp", msg, loc);
  }

  void step() {
    if (++out_.steps > opts_.step_limit)
      fail("nontermination suspected (step limit " + std::to_string(opts_.step_limit) +
           " exceeded)");
  }

  void enter(const ir::Function& f, const ir::Block& b) {
    hcir::BlockRef ref{f.name, b.label};
    auto it = costs_.find(ref);
    if (it == costs_.end())
      fail("no cost for block " + ref.to_string());
    out_.cost += it->second;
    ++out_.visits[ref];
    if (opts_.trace)
      out_.trace.push_back(ref);
  }

  ConcreteValue& deref(const Pointer& p, Location loc) {
    ConcreteValue* cur = &heap_.at(p.object);
    for (auto idx : p.path) {
      if (!cur->is_aggregate())
        fail("indexing into a scalar", loc);
      if (idx < 0 || static_cast<std::size_t>(idx) >= cur->items.size())
        fail("index " + std::to_string(idx) + " out of range (size " +
                 std::to_string(cur->items.size()) + ")",
             loc);
      cur = &cur->items[static_cast<std::size_t>(idx)];
    }
    return *cur;
  }

  static std::int64_t as_int(const RegValue& v, Location loc) {
    const auto* c = std::get_if<ConcreteValue>(&v);
    if (!c || !c->is_int())
      fail("expected an integer value", loc);
    return c->integer;
  }

  static const Pointer& as_pointer(const RegValue& v, Location loc) {
    const auto* p = std::get_if<Pointer>(&v);
    if (!p)
      fail("expected a pointer value", loc);
    return *p;
  }

  using Env = std::map<std::string, RegValue>;

  static RegValue value(const Env& env, const ir::Value& v, Location loc) {
    if (!v.is_register())
      return ConcreteValue::of(v.constant);
    auto it = env.find(v.name);
    if (it == env.end())
      fail("read of undefined register %" + v.name, loc);
    return it->second;
  }

  std::optional<ConcreteValue> call(const ir::Function& f, const std::vector<RegValue>& args,
                                    int depth) {
    if (depth > kMaxCallDepth)
      fail("nontermination suspected (call depth " + std::to_string(kMaxCallDepth) + ")");
    Env env;
    for (std::size_t i = 0; i < f.params.size(); ++i)
      env[f.params[i].name] = args[i];
    const ir::Block* block = &f.blocks.at(0);
    std::string prev;
    while (true) {
      enter(f, *block);
      // Phis read their operands simultaneously.
      std::vector<std::pair<std::string, RegValue>> phis;
      for (const auto& in : block->instructions) {
        if (in.op != Opcode::Phi)
          break;
        step();
        bool found = false;
        for (std::size_t k = 0; k < in.incoming.size(); ++k)
          if (in.incoming[k] == prev) {
            phis.emplace_back(*in.result, value(env, in.operands[k], in.loc));
            found = true;
            break;
          }
        if (!found)
          fail("phi %" + *in.result + " has no value for predecessor " + prev, in.loc);
      }
      for (auto& [name, v] : phis)
        env[name] = std::move(v);
      const ir::Instruction* next = nullptr;
      for (const auto& in : block->instructions) {
        if (in.op == Opcode::Phi)
          continue;
        step();
        auto val = [&](std::size_t k) { return value(env, in.operands[k], in.loc); };
        auto ival = [&](std::size_t k) { return as_int(val(k), in.loc); };
        switch (in.op) {
        case Opcode::Add:
          env[*in.result] = ConcreteValue::of(checked_add(ival(0), ival(1)));
          break;
        case Opcode::Sub:
          env[*in.result] = ConcreteValue::of(checked_sub(ival(0), ival(1)));
          break;
        case Opcode::Mul:
          env[*in.result] = ConcreteValue::of(checked_mul(ival(0), ival(1)));
          break;
        case Opcode::ICmp:
          env[*in.result] =
              ConcreteValue::of(hcir::compare(hcir::compare_op(in.pred), ival(0), ival(1)));
          break;
        case Opcode::ZExt:
          env[*in.result] = ConcreteValue::of(zext_value(ival(0), in.operand_types[0]->width));
          break;
        case Opcode::Trunc:
          env[*in.result] = ConcreteValue::of(trunc_value(ival(0), in.type->width));
          break;
        case Opcode::Alloca: {
          hcir::TypeNamer namer(&m_);
          heap_.push_back(zero_value(in.elem_type, namer, 0));
          env[*in.result] = Pointer{heap_.size() - 1, {}};
          break;
        }
        case Opcode::GetElementPtr: {
          Pointer p = as_pointer(val(0), in.loc);
          for (std::size_t k = 1; k < in.operands.size(); ++k)
            p.path.push_back(ival(k));
          env[*in.result] = std::move(p);
          break;
        }
        case Opcode::Load:
          env[*in.result] = deref(as_pointer(val(0), in.loc), in.loc);
          break;
        case Opcode::Store: {
          RegValue v = val(0);
          const auto* c = std::get_if<ConcreteValue>(&v);
          if (!c)
            fail("storing a pointer is unsupported", in.loc);
          deref(as_pointer(val(1), in.loc), in.loc) = *c;
          break;
        }
        case Opcode::Call: {
          std::vector<RegValue> actual;
          for (std::size_t k = 0; k < in.operands.size(); ++k)
            actual.push_back(val(k));
          std::optional<ConcreteValue> r;
          if (const ir::Function* callee = m_.find_function(in.callee)) {
            r = call(*callee, actual, depth + 1);
          } else if (m_.find_declaration(in.callee)) {
            auto it = external_.find(in.callee);
            if (it == external_.end())
              fail("no cost for external function @" + in.callee, in.loc);
            out_.cost += it->second;
            out_.external_cost += it->second;
            r = ConcreteValue::of(0);
          } else {
            fail("call to unknown function @" + in.callee, in.loc);
          }
          if (in.result) {
            if (!r)
              fail("@" + in.callee + " returned no value", in.loc);
            env[*in.result] = *r;
          }
          break;
        }
        case Opcode::Ret:
          if (in.operands.empty())
            return std::nullopt;
          return std::get<ConcreteValue>(val(0));
        case Opcode::Br:
        case Opcode::BrCond:
          next = &in;
          break;
        case Opcode::Phi:
          break;
        }
        if (next)
          break;
      }
      if (!next)
        fail("block " + block->label + " fell through without a terminator", block->loc);
      std::size_t which = 0;
      if (next->op == Opcode::BrCond)
        which = as_int(value(env, next->operands[0], next->loc), next->loc) != 0 ? 0 : 1;
      const ir::BranchTarget& t = next->targets.at(which);
      const ir::Block* target = f.find_block(t.label);
      if (!target)
        fail("branch to unknown block " + t.label, next->loc);
      std::vector<RegValue> passed;
      for (const auto& a : t.args)
        passed.push_back(value(env, a, next->loc));
      if (passed.size() != target->params.size())
        fail("block " + t.label + " expects " + std::to_string(target->params.size()) +
                 " arguments",
             next->loc);
      for (std::size_t k = 0; k < passed.size(); ++k)
        env[target->params[k].name] = std::move(passed[k]);
      prev = block->label;
      block = target;
    }
  }
};

} // namespace

CostedRun run_ir(const ir::Module& m, const std::string& fn, const std::vector<ConcreteValue>& args,
                 const BlockCosts& costs, const ExternalCosts& external, const RunOptions& opts) {
  return IrMachine(m, costs, external, opts).run(fn, args);
}

} // namespace irenergy::interp
