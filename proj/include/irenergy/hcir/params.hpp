#pragma once

#include "irenergy/ir/cfg.hpp"
#include "irenergy/ir/ir.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace irenergy::hcir {

using RegSet = std::set<std::string>;

struct GenKill {
  RegSet gen;
  RegSet kill;
};

/// Per-instruction formula: kill is every definition in the block (phi
/// results included); gen is every register read before any definition of
/// it in the block (phi operands included).
GenKill gen_kill(const ir::Block& b);

struct BlockParams {
  // Phi-aware sets: phi results count as received (gen), phi operands are
  // uses on the incoming edge, and kill holds the non-phi definitions.
  RegSet gen, kill;
  RegSet params_in, params_out;
  bool operator==(const BlockParams&) const = default;
};

struct ParamSets {
  std::map<std::string, BlockParams> blocks;
  int iterations = 0;  // sweeps until nothing changed, including the last

  const BlockParams& at(const std::string& label) const;
  bool same_sets(const ParamSets& o) const { return blocks == o.blocks; }
};

struct FixpointOptions {
  // Sweep order over block labels; empty means postorder of the CFG with
  // unreachable blocks last.
  std::vector<std::string> order;
};

ParamSets infer_block_params(const ir::Function& f, const FixpointOptions& opts = {});

/// Moves every phi into its block's parameter list and threads the incoming
/// values through the predecessors' branch targets. Throws Error("phi") on a
/// phi whose operand count differs from the predecessor count or whose
/// result is not a block input.
ir::Function eliminate_phi(const ir::Function& f, const ParamSets& p);

} // namespace irenergy::hcir
