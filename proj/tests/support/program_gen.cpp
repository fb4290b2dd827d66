#include "program_gen.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace irenergy::testing {

namespace {

struct BlockText {
  std::string label;
  std::vector<std::string> lines;
};

class Builder {
public:
  Builder(Rng& rng, const ProgramOptions& opts, GeneratedProgram& out)
      : rng_(rng), opts_(opts), out_(out) {}

  void build() {
    sizes_ = {"N"};
    if (opts_.two_sizes && rng_.coin(0.5))
      sizes_.push_back("M");
    if (opts_.arrays) {
      arrays_ = {"A"};
      if (rng_.coin(0.6))
        arrays_.push_back("B");
    }
    out_.size_params = sizes_;
    out_.array_params = arrays_;

    new_block("entry");
    env_["acc"] = "0";
    region(0, {}, opts_.max_stmts);
    // At least one loop so the analysis has something to solve.
    if (out_.loops.empty())
      loop(0, {});
    if (opts_.returns_value)
      emit("ret i32 " + env_["acc"]);
    else
      emit("ret void");

    std::ostringstream os;
    os << "define " << (opts_.returns_value ? "i32" : "void") << " @" << out_.name << "(";
    bool first = true;
    for (const auto& s : sizes_) {
      os << (first ? "" : ", ") << "i32 %" << s;
      first = false;
    }
    for (const auto& a : arrays_) {
      os << (first ? "" : ", ") << "[0 x i32]* %" << a;
      first = false;
    }
    os << ") {\n";
    for (const auto& b : blocks_) {
      os << b.label << ":\n";
      for (const auto& l : b.lines)
        os << "  " << l << "\n";
    }
    os << "}\n";
    out_.text = os.str();
  }

private:
  Rng& rng_;
  const ProgramOptions& opts_;
  GeneratedProgram& out_;
  std::vector<BlockText> blocks_;
  std::size_t cur_ = 0;
  std::map<std::string, std::string> env_;  // scalar -> value text
  std::vector<std::string> sizes_, arrays_;
  int regs_ = 0, labels_ = 0, scalars_ = 0;

  std::string reg(const std::string& hint) { return "%" + hint + std::to_string(regs_++); }
  std::string label(const std::string& hint) { return hint + std::to_string(labels_++); }
  void new_block(const std::string& l) {
    blocks_.push_back({l, {}});
    cur_ = blocks_.size() - 1;
  }
  void emit(const std::string& line) { blocks_[cur_].lines.push_back(line); }

  std::string scalar_operand() {
    std::vector<std::string> names;
    for (const auto& [k, v] : env_)
      names.push_back(k);
    if (rng_.coin(0.3))
      return std::to_string(rng_.int_in(0, 3));
    if (rng_.coin(0.2))
      return "%" + rng_.pick(sizes_);
    return env_[rng_.pick(names)];
  }

  void region(int depth, const std::vector<std::string>& counters, int budget) {
    long n = rng_.int_in(1, budget);
    for (long s = 0; s < n; ++s) {
      long choice = rng_.int_in(0, 9);
      if (choice < 2 && depth < opts_.max_depth) {
        loop(depth, counters);
      } else if (choice < 3 && opts_.diamonds) {
        diamond(counters);
      } else if (choice < 5 && opts_.arrays && !counters.empty()) {
        array_access(counters);
      } else {
        arith(counters);
      }
    }
  }

  void arith(const std::vector<std::string>& counters) {
    std::string target = "acc";
    if (rng_.coin(0.3) || env_.size() < 2) {
      target = "t" + std::to_string(scalars_++);
      env_[target] = "0";
    } else {
      std::vector<std::string> names;
      // Loop counters (n<k>) are only ever decremented by their latch.
      for (const auto& [k, v] : env_)
        if (!(k.size() > 1 && k[0] == 'n' && std::isdigit(static_cast<unsigned char>(k[1]))))
          names.push_back(k);
      target = rng_.pick(names);
    }
    std::string r = reg("v");
    long op = rng_.int_in(0, 2);
    if (op == 2 && !counters.empty()) {
      // Bounded product: counter times a small constant.
      std::string m = reg("m");
      emit(m + " = mul i32 " + env_[rng_.pick(counters)] + ", " +
           std::to_string(rng_.int_in(0, 3)));
      emit(r + " = add i32 " + env_[target] + ", " + m);
    } else {
      emit(r + " = " + (op == 1 ? "sub" : "add") + " i32 " + env_[target] + ", " +
           scalar_operand());
    }
    env_[target] = r;
  }

  void array_access(const std::vector<std::string>& counters) {
    const std::string& ctr = rng_.pick(counters);
    const std::string& arr = rng_.pick(arrays_);
    std::string idx = reg("idx");
    emit(idx + " = sub i32 " + env_[ctr] + ", 1");
    std::string p = reg("p");
    emit(p + " = getelementptr [0 x i32], [0 x i32]* %" + arr + ", i32 " + idx);
    if (rng_.coin(0.6)) {
      std::string v = reg("e");
      emit(v + " = load i32, i32* " + p);
      std::string r = reg("v");
      emit(r + " = add i32 " + env_["acc"] + ", " + v);
      env_["acc"] = r;
    } else {
      emit("store i32 " + env_["acc"] + ", i32* " + p);
    }
  }

  void diamond(const std::vector<std::string>& counters) {
    std::string c = reg("c");
    static const std::vector<std::string> preds = {"slt", "sgt", "eq", "ne", "sle", "sge"};
    emit(c + " = icmp " + rng_.pick(preds) + " i32 " + scalar_operand() + ", " +
         scalar_operand());
    std::string lt = label("then"), le = label("else"), lj = label("join");
    emit("br i1 " + c + ", label %" + lt + ", label %" + le);
    auto before = env_;

    new_block(lt);
    long nt = rng_.int_in(0, 2);
    for (long i = 0; i < nt; ++i)
      arith(counters);
    emit("br label %" + lj);
    std::string then_end = blocks_[cur_].label;
    auto then_env = env_;

    env_ = before;
    new_block(le);
    long ne = rng_.int_in(0, 2);
    for (long i = 0; i < ne; ++i)
      arith(counters);
    emit("br label %" + lj);
    std::string else_end = blocks_[cur_].label;
    auto else_env = env_;

    new_block(lj);
    env_.clear();
    for (const auto& [k, v] : before) {
      const std::string& a = then_env[k];
      const std::string& b = else_env[k];
      if (a == b) {
        env_[k] = a;
        continue;
      }
      std::string r = reg(k + "_");
      emit(r + " = phi i32 [ " + a + ", %" + then_end + " ], [ " + b + ", %" + else_end +
           " ]");
      env_[k] = r;
    }
  }

  void loop(int depth, std::vector<std::string> counters) {
    std::string ctr = "n" + std::to_string(scalars_++);
    std::string init;
    long how = rng_.int_in(0, 2);
    if (how == 2 && !counters.empty()) {
      init = env_[rng_.pick(counters)];
    } else if (how == 1) {
      init = reg("init");
      emit(init + " = add i32 %" + rng_.pick(sizes_) + ", " + std::to_string(rng_.int_in(1, 2)));
    } else {
      init = "%" + rng_.pick(sizes_);
    }
    std::string hdr = label("loop"), body = label("body"), exit = label("exit");
    emit("br label %" + hdr);
    std::string pre = blocks_[cur_].label;
    auto before = env_;
    before[ctr] = init;

    new_block(hdr);
    std::size_t hdr_index = cur_;
    std::map<std::string, std::string> phis;
    for (const auto& [k, v] : before)
      phis[k] = reg(k + "_");
    env_ = phis;
    std::string cond = reg("c");
    bool ne = rng_.coin(0.3);
    std::vector<std::string> tail = {
        cond + " = icmp " + (ne ? "ne" : "sgt") + " i32 " + phis[ctr] + ", 0",
        "br i1 " + cond + ", label %" + body + ", label %" + exit};
    out_.loops.push_back({hdr, phis[ctr].substr(1), depth});

    new_block(body);
    counters.push_back(ctr);
    region(depth + 1, counters, opts_.max_stmts);
    std::string dec = reg(ctr + "d");
    emit(dec + " = sub i32 " + env_[ctr] + ", 1");
    env_[ctr] = dec;
    emit("br label %" + hdr);
    std::string latch = blocks_[cur_].label;

    auto& lines = blocks_[hdr_index].lines;
    for (const auto& [k, r] : phis)
      lines.push_back(r + " = phi i32 [ " + before[k] + ", %" + pre + " ], [ " + env_[k] +
                      ", %" + latch + " ]");
    lines.insert(lines.end(), tail.begin(), tail.end());

    new_block(exit);
    env_.clear();
    for (const auto& [k, v] : before)
      if (k != ctr)
        env_[k] = phis[k];
  }
};

} // namespace

GeneratedProgram random_program(Rng& rng, const std::string& name, const ProgramOptions& opts) {
  GeneratedProgram out;
  out.name = name;
  Builder(rng, opts, out).build();
  return out;
}

ir::Function random_cfg(Rng& rng, int blocks) {
  ir::Function f;
  f.name = "cfg";
  f.ret_type = ir::make_void();
  f.params.push_back({"c", ir::make_int(1)});
  for (int i = 0; i < blocks; ++i) {
    ir::Block b;
    b.label = "b" + std::to_string(i);
    ir::Instruction t;
    t.type = ir::make_void();
    long kind = rng.int_in(0, 2);
    auto target = [&] {
      // Never jump back to the entry block.
      ir::BranchTarget bt;
      bt.label = "b" + std::to_string(rng.int_in(1, std::max(1, blocks - 1)));
      return bt;
    };
    if (kind == 0 || blocks == 1) {
      t.op = ir::Opcode::Ret;
    } else if (kind == 1) {
      t.op = ir::Opcode::Br;
      t.targets.push_back(target());
    } else {
      t.op = ir::Opcode::BrCond;
      t.operands.push_back(ir::Value::reg("c"));
      t.operand_types.push_back(ir::make_int(1));
      t.targets.push_back(target());
      t.targets.push_back(target());
    }
    b.instructions.push_back(std::move(t));
    f.blocks.push_back(std::move(b));
  }
  return f;
}

ir::Block random_straight_block(Rng& rng, int length) {
  static const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f", "g"};
  static const std::vector<ir::Opcode> ops = {ir::Opcode::Add, ir::Opcode::Sub,
                                              ir::Opcode::Mul};
  ir::Block b;
  b.label = "straight";
  std::set<std::string> defined;
  for (int i = 0; i < length; ++i) {
    ir::Instruction in;
    in.op = rng.pick(ops);
    in.type = ir::make_int(32);
    for (int k = 0; k < 2; ++k) {
      if (rng.coin(0.2))
        in.operands.push_back(ir::Value::imm(rng.int_in(0, 9)));
      else
        in.operands.push_back(ir::Value::reg(rng.pick(pool)));
      in.operand_types.push_back(in.type);
    }
    // Each register is defined at most once.
    std::vector<std::string> fresh;
    for (const auto& p : pool)
      if (!defined.count(p))
        fresh.push_back(p);
    if (!fresh.empty() && rng.coin(0.6)) {
      in.result = rng.pick(fresh);
      defined.insert(*in.result);
    } else {
      in.result = "x" + std::to_string(i);
    }
    b.instructions.push_back(std::move(in));
  }
  ir::Instruction ret;
  ret.op = ir::Opcode::Ret;
  ret.type = ir::make_void();
  b.instructions.push_back(std::move(ret));
  return b;
}

ir::TypePtr random_type(Rng& rng, int max_depth) {
  long kind = max_depth <= 0 ? 0 : rng.int_in(0, 3);
  switch (kind) {
  case 0:
    return ir::make_int(static_cast<unsigned>(rng.pick(std::vector<long>{1, 8, 32, 64})));
  case 1: {
    long n = rng.int_in(0, 6);
    return ir::make_array(n == 0 ? std::nullopt : std::optional<std::uint64_t>(n),
                          random_type(rng, max_depth - 1));
  }
  case 2: {
    std::vector<ir::TypePtr> fields;
    long n = rng.int_in(1, 3);
    for (long i = 0; i < n; ++i)
      fields.push_back(random_type(rng, max_depth - 1));
    return ir::make_struct(std::move(fields));
  }
  default:
    return ir::make_pointer(random_type(rng, max_depth - 1));
  }
}

} // namespace irenergy::testing
