#include "irenergy/ir/validate.hpp"

#include "irenergy/ir/cfg.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <set>

namespace irenergy::ir {

std::string ValidationReport::to_string() const {
  std::string out;
  for (const auto& v : violations) {
    out += v.message;
    if (v.loc.line > 0)
      out += " (line " + std::to_string(v.loc.line) + ")";
    out += "\n";
  }
  return out;
}

namespace {

struct Site {
  std::string block;
  int index;  // -2 function parameter, -1 block parameter
};

class Validator {
public:
  explicit Validator(const Function& f) : f_(f) {}

  ValidationReport run() {
    check_structure();
    check_labels();
    preds_ = predecessors(f_);
    check_entry_and_reachability();
    collect_defs();
    dom_ = dominators(f_);
    check_phis_and_uses();
    return std::move(report_);
  }

private:
  const Function& f_;
  ValidationReport report_;
  std::map<std::string, std::vector<std::string>> preds_;
  std::set<std::string> reachable_;
  std::map<std::string, std::vector<Site>> defs_;
  std::map<std::string, std::set<std::string>> dom_;

  void add(Violation::Kind k, std::string msg, const std::string& block, Location loc = {}) {
    report_.violations.push_back({k, std::move(msg), block, loc});
  }

  void check_structure() {
    for (const auto& b : f_.blocks) {
      bool seen_non_phi = false;
      for (std::size_t i = 0; i < b.instructions.size(); ++i) {
        const auto& in = b.instructions[i];
        if (is_terminator(in.op) && i + 1 != b.instructions.size())
          add(Violation::Kind::MisplacedTerminator,
              "terminator not at end of block " + b.label, b.label, in.loc);
        if (in.op == Opcode::Phi && seen_non_phi)
          add(Violation::Kind::MisplacedPhi, "phi not at start of block " + b.label,
              b.label, in.loc);
        if (in.op != Opcode::Phi)
          seen_non_phi = true;
      }
      if (b.instructions.empty() || !is_terminator(b.instructions.back().op))
        add(Violation::Kind::MissingTerminator, "missing terminator in block " + b.label,
            b.label, b.loc);
    }
  }

  void check_labels() {
    for (const auto& b : f_.blocks) {
      const Instruction* term = b.terminator();
      if (!term)
        continue;
      for (const auto& t : term->targets) {
        const Block* target = f_.find_block(t.label);
        if (!target) {
          add(Violation::Kind::UndefinedLabel, "branch to undefined label %" + t.label,
              b.label, term->loc);
        } else if (t.args.size() != target->params.size()) {
          add(Violation::Kind::BranchArity,
              "branch to " + t.label + " passes " + std::to_string(t.args.size()) +
                  " arguments, expected " + std::to_string(target->params.size()),
              b.label, term->loc);
        }
      }
    }
  }

  void check_entry_and_reachability() {
    if (f_.blocks.empty())
      return;
    const auto& entry = f_.blocks.front();
    if (!preds_[entry.label].empty())
      add(Violation::Kind::EntryHasPredecessors,
          "entry block " + entry.label + " has predecessors", entry.label, entry.loc);
    reachable_ = reachable(f_);
    for (const auto& b : f_.blocks)
      if (!reachable_.count(b.label))
        add(Violation::Kind::Unreachable, "unreachable block " + b.label, b.label, b.loc);
  }

  void define(const std::string& name, Site site, Location loc) {
    auto& sites = defs_[name];
    if (!sites.empty())
      add(Violation::Kind::DoubleDefinition, "double definition of %" + name, site.block,
          loc);
    sites.push_back(std::move(site));
  }

  void collect_defs() {
    std::string entry = f_.blocks.empty() ? "" : f_.blocks.front().label;
    for (const auto& p : f_.params)
      define(p.name, {entry, -2}, f_.loc);
    for (const auto& b : f_.blocks) {
      for (const auto& p : b.params)
        define(p.name, {b.label, -1}, b.loc);
      for (std::size_t i = 0; i < b.instructions.size(); ++i)
        if (b.instructions[i].result)
          define(*b.instructions[i].result, {b.label, static_cast<int>(i)},
                 b.instructions[i].loc);
    }
  }

  bool dominated(const std::string& name, const std::string& block, int index) {
    for (const auto& s : defs_[name]) {
      if (s.block == block) {
        if (s.index < index)
          return true;
      } else if (dom_.count(block) && dom_[block].count(s.block)) {
        return true;
      }
    }
    return false;
  }

  void use(const Value& v, const std::string& block, int index, Location loc) {
    if (!v.is_register())
      return;
    if (!defs_.count(v.name)) {
      add(Violation::Kind::UndefinedUse, "use of undefined %" + v.name, block, loc);
      return;
    }
    if (!dominated(v.name, block, index))
      add(Violation::Kind::UseNotDominated,
          "use of %" + v.name + " not dominated by its definition", block, loc);
  }

  void check_phis_and_uses() {
    for (const auto& b : f_.blocks) {
      if (!reachable_.count(b.label))
        continue;
      const auto& preds = preds_[b.label];
      for (std::size_t i = 0; i < b.instructions.size(); ++i) {
        const auto& in = b.instructions[i];
        if (in.op == Opcode::Phi) {
          check_phi(b, in, preds);
          continue;
        }
        for (const auto& v : in.operands)
          use(v, b.label, static_cast<int>(i), in.loc);
        for (const auto& t : in.targets)
          for (const auto& v : t.args)
            use(v, b.label, static_cast<int>(i), in.loc);
      }
    }
  }

  void check_phi(const Block& b, const Instruction& in,
                 const std::vector<std::string>& preds) {
    std::string name = in.result ? *in.result : "?";
    if (in.operands.size() != preds.size()) {
      add(Violation::Kind::PhiArity,
          "phi %" + name + " has " + std::to_string(in.operands.size()) +
              " incoming values but block " + b.label + " has " +
              std::to_string(preds.size()) + " predecessors",
          b.label, in.loc);
      return;
    }
    std::set<std::string> seen;
    for (std::size_t k = 0; k < in.operands.size(); ++k) {
      const auto& from = in.incoming[k];
      if (std::find(preds.begin(), preds.end(), from) == preds.end() ||
          !seen.insert(from).second) {
        add(Violation::Kind::PhiIncoming,
            "phi %" + name + " incoming block " + from + " is not a distinct predecessor",
            b.label, in.loc);
        continue;
      }
      // An edge use happens at the end of the predecessor.
      if (reachable_.count(from))
        use(in.operands[k], from, INT_MAX, in.loc);
    }
  }
};

} // namespace

ValidationReport validate_ssa(const Function& f) { return Validator(f).run(); }

void require_valid(const Module& m) {
  for (const auto& f : m.functions) {
    auto report = validate_ssa(f);
    if (!report.ok()) {
      const auto& v = report.violations.front();
      throw Error("validate", "@" + f.name + ": " + v.message, v.loc);
    }
  }
}

} // namespace irenergy::ir
