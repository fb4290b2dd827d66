#include "irenergy/hcir/params.hpp"

#include <algorithm>

namespace irenergy::hcir {

namespace {

RegSet phi_results(const ir::Block& b) {
  RegSet out;
  for (const auto& in : b.instructions)
    if (in.op == ir::Opcode::Phi && in.result)
      out.insert(*in.result);
  return out;
}

// Registers the phis of `to` read along the edge from `from`.
RegSet edge_uses(const ir::Block& to, const std::string& from) {
  RegSet out;
  for (const auto& in : to.instructions) {
    if (in.op != ir::Opcode::Phi)
      continue;
    for (std::size_t i = 0; i < in.operands.size() && i < in.incoming.size(); ++i)
      if (in.incoming[i] == from && in.operands[i].is_register())
        out.insert(in.operands[i].name);
  }
  return out;
}

BlockParams local_sets(const ir::Block& b) {
  BlockParams s;
  s.gen = phi_results(b);
  for (const auto& p : b.params)
    s.gen.insert(p.name);
  RegSet defined;
  for (const auto& in : b.instructions) {
    if (in.op == ir::Opcode::Phi)
      continue;
    auto dr = ir::def_ref(in);
    for (const auto& r : dr.ref)
      if (!defined.count(r) && !s.gen.count(r))
        s.gen.insert(r);
    for (const auto& d : dr.def) {
      defined.insert(d);
      s.kill.insert(d);
    }
  }
  return s;
}

} // namespace

GenKill gen_kill(const ir::Block& b) {
  GenKill gk;
  for (const auto& in : b.instructions) {
    auto dr = ir::def_ref(in);
    for (const auto& r : dr.ref)
      if (!gk.kill.count(r))
        gk.gen.insert(r);
    gk.kill.insert(dr.def.begin(), dr.def.end());
  }
  return gk;
}

const BlockParams& ParamSets::at(const std::string& label) const {
  auto it = blocks.find(label);
  if (it == blocks.end())
    throw Error("params", "no block " + label);
  return it->second;
}

ParamSets infer_block_params(const ir::Function& f, const FixpointOptions& opts) {
  auto next = ir::build_cfg(f);
  ParamSets ps;
  std::map<std::string, RegSet> phis;
  for (const auto& b : f.blocks) {
    ps.blocks[b.label] = local_sets(b);
    phis[b.label] = phi_results(b);
    for (const auto& p : b.params)
      phis[b.label].insert(p.name);
  }
  // What b hands to s: s's inputs other than its own phis, plus the values
  // s's phis read along the edge (or, after elimination, the branch args).
  auto handed = [&](const ir::Block& b, const std::string& s) {
    RegSet out;
    for (const auto& r : ps.blocks[s].params_in)
      if (!phis[s].count(r))
        out.insert(r);
    for (const auto& r : edge_uses(*f.find_block(s), b.label))
      out.insert(r);
    if (const auto* t = b.terminator())
      for (const auto& target : t->targets)
        if (target.label == s)
          for (const auto& a : target.args)
            if (a.is_register())
              out.insert(a.name);
    return out;
  };

  std::vector<std::string> order = opts.order;
  if (order.empty()) {
    order = ir::reverse_postorder(f);
    std::reverse(order.begin(), order.end());
    for (const auto& b : f.blocks)
      if (std::find(order.begin(), order.end(), b.label) == order.end())
        order.push_back(b.label);
  }
  const std::string entry = f.blocks.empty() ? "" : f.blocks.front().label;
  RegSet fparams;
  for (const auto& p : f.params)
    fparams.insert(p.name);

  bool changed = true;
  while (changed) {
    changed = false;
    ++ps.iterations;
    for (const auto& label : order) {
      const ir::Block& b = *f.find_block(label);
      BlockParams& s = ps.blocks[label];
      RegSet in = s.gen, out_candidates;
      for (const auto& succ : next[label]) {
        auto h = handed(b, succ);
        out_candidates.insert(h.begin(), h.end());
        for (const auto& r : h)
          if (!s.kill.count(r))
            in.insert(r);
      }
      if (label == entry)
        in = fparams;
      RegSet out;
      for (const auto& r : out_candidates)
        if (s.kill.count(r) || in.count(r))
          out.insert(r);
      if (in != s.params_in || out != s.params_out) {
        s.params_in = std::move(in);
        s.params_out = std::move(out);
        changed = true;
      }
    }
  }
  return ps;
}

ir::Function eliminate_phi(const ir::Function& f, const ParamSets& p) {
  ir::Function g = f;
  auto preds = ir::predecessors(f);
  // label -> phi list of that block, in order
  std::map<std::string, std::vector<ir::Instruction>> phis;
  for (auto& b : g.blocks) {
    std::vector<ir::Instruction> rest;
    for (auto& in : b.instructions) {
      if (in.op != ir::Opcode::Phi) {
        rest.push_back(std::move(in));
        continue;
      }
      if (in.operands.size() != preds[b.label].size())
        throw Error("phi",
                    "phi %" + in.result.value_or("?") + " in block " + b.label + " has " +
                        std::to_string(in.operands.size()) + " operands but " +
                        std::to_string(preds[b.label].size()) + " predecessors",
                    in.loc);
      if (!p.at(b.label).params_in.count(*in.result))
        throw Error("phi", "phi %" + *in.result + " is not an input of block " + b.label,
                    in.loc);
      b.params.push_back({*in.result, in.type});
      phis[b.label].push_back(std::move(in));
    }
    b.instructions = std::move(rest);
  }
  for (auto& b : g.blocks) {
    if (b.instructions.empty() || !ir::is_terminator(b.instructions.back().op))
      continue;
    for (auto& t : b.instructions.back().targets) {
      auto it = phis.find(t.label);
      if (it == phis.end())
        continue;
      t.args.clear();
      t.arg_types.clear();
      for (const auto& phi : it->second) {
        bool found = false;
        for (std::size_t i = 0; i < phi.incoming.size(); ++i)
          if (phi.incoming[i] == b.label) {
            t.args.push_back(phi.operands[i]);
            t.arg_types.push_back(phi.operand_types.size() > i ? phi.operand_types[i]
                                                                : phi.type);
            found = true;
            break;
          }
        if (!found)
          throw Error("phi", "phi %" + *phi.result + " has no value for predecessor " + b.label,
                      phi.loc);
      }
    }
  }
  return g;
}

} // namespace irenergy::hcir
