#pragma once

#include "irenergy/ir/ir.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace irenergy::ir {

using SuccessorMap = std::map<std::string, std::set<std::string>>;

/// next(b) for every block. Throws Error("cfg") on a branch to an undefined
/// label.
SuccessorMap build_cfg(const Function& f);

/// Predecessor labels per block, each in block order.
std::map<std::string, std::vector<std::string>> predecessors(const Function& f);

/// Labels reachable from the entry block.
std::set<std::string> reachable(const Function& f);

/// Immediate-dominator-free dominance sets over reachable blocks:
/// dom[b] is the set of blocks dominating b, including b.
std::map<std::string, std::set<std::string>> dominators(const Function& f);

/// Reachable blocks in reverse postorder from the entry.
std::vector<std::string> reverse_postorder(const Function& f);

} // namespace irenergy::ir
