#pragma once

#include "irenergy/hcir/program.hpp"
#include "irenergy/interp/value.hpp"
#include "irenergy/ir/ir.hpp"
#include "irenergy/support/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace irenergy::interp {

struct RunOptions {
  long step_limit = 10'000'000;
  bool trace = false;
};

struct CostedRun {
  std::optional<ConcreteValue> result;
  // Final contents of pointer parameters, by parameter index. run_ir reports
  // every pointer parameter, run_hcir the copied-out ones.
  std::map<std::size_t, ConcreteValue> pointers;
  Rational cost = 0;
  std::map<hcir::BlockRef, long> visits;
  // Cost of calls to external functions, included in `cost`.
  Rational external_cost = 0;
  long steps = 0;
  std::vector<hcir::BlockRef> trace;
};

using BlockCosts = std::map<hcir::BlockRef, Rational>;
using ExternalCosts = std::map<std::string, Rational>;

/// Executes function `fn` of `m`. Pointer arguments are given as the value
/// they point to. Works on functions with phis or with block parameters.
/// Each block entry costs `costs` of that block; a call to a declaration
/// costs its `external` entry and returns 0.
CostedRun run_ir(const ir::Module& m, const std::string& fn, const std::vector<ConcreteValue>& args,
                 const BlockCosts& costs, const ExternalCosts& external = {},
                 const RunOptions& opts = {});

struct PredRun {
  std::vector<ConcreteValue> outputs;
  CostedRun run;
};

/// Calls `pred` with its input arguments. Clause selection tries clauses in
/// order and commits to the first whose leading tests hold. `costs` is
/// indexed like `p.clauses`; external predicates cost their assertion
/// energy and return 0.
PredRun run_hcir(const hcir::HCProgram& p, const std::string& pred,
                 const std::vector<ConcreteValue>& args, const std::vector<Rational>& costs,
                 const RunOptions& opts = {});

/// run_hcir on the entry predicate of function `fn`, unpacking copied-out
/// parameters and the return value.
CostedRun run_hcir_function(const hcir::HCProgram& p, const std::string& fn,
                            const std::vector<ConcreteValue>& args,
                            const std::vector<Rational>& costs, const RunOptions& opts = {});

} // namespace irenergy::interp
