#pragma once

#include "irenergy/ir/ir.hpp"

#include <string>
#include <vector>

namespace irenergy::ir {

struct Violation {
  enum class Kind {
    DoubleDefinition,
    UndefinedUse,
    UseNotDominated,
    MissingTerminator,
    MisplacedTerminator,
    MisplacedPhi,
    PhiArity,
    PhiIncoming,
    BranchArity,
    UndefinedLabel,
    EntryHasPredecessors,
    Unreachable,
  };
  Kind kind;
  std::string message;
  std::string block;
  Location loc;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate_ssa(const Function& f);

/// Validates every function; throws Error("validate") with the first
/// violation.
void require_valid(const Module& m);

} // namespace irenergy::ir
