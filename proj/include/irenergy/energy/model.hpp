#pragma once

#include "irenergy/hcir/program.hpp"
#include "irenergy/support/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace irenergy::energy {

/// Average-case energy costs in nanojoules. Immutable once loaded.
struct EnergyModel {
  std::map<std::string, Rational> opcode_costs;
  std::map<hcir::BlockRef, Rational> block_costs;
  std::vector<hcir::TrustAssertion> assertions;

  /// Exact key first, then the family key: icmp_ne falls back to icmp and
  /// br_cond to br.
  std::optional<Rational> opcode_cost(const std::string& key) const;
  const hcir::TrustAssertion* find_assertion(const std::string& pred, std::size_t arity) const;
};

/// Line format, `#` starts a comment:
///
///   instr <opcode> <nJ>
///   block <function>:<label> <nJ>
///   pred <name>/<arity> avg <nJ> [size <arg> <lower> <upper>]...
///
/// Size bounds are whitespace-free: `inf`, `elem(k)` or affine over s0, s1, ...
/// Errors carry stage "model" and the offending line.
EnergyModel load_cost_model(std::string_view text);
EnergyModel load_cost_model_file(const std::string& path);

/// Cost of each clause of `p`, indexed like `p.clauses`.
using CostMap = std::vector<Rational>;

/// Block override for the clause origin if present, else the sum of the
/// clause's literal costs and absorbed instructions. Calls cost nothing here;
/// their callees are charged by the recurrence. Abstract builtins with an
/// energy assertion cost the asserted value instead of their instructions.
CostMap aggregate_block_costs(const EnergyModel& m, const hcir::HCProgram& p);

/// Local cost of one literal (no override logic).
Rational literal_cost(const EnergyModel& m, const hcir::HCProgram& p, const hcir::Literal& l,
                      const std::string& where = "");

/// Per IR block view of a cost map, for the IR interpreter.
std::map<hcir::BlockRef, Rational> block_cost_map(const hcir::HCProgram& p, const CostMap& c);

/// Attaches the model's assertions to `p`, completing types and default size
/// relations.
void emit_trust_assertions(const EnergyModel& m, hcir::HCProgram& p);

} // namespace irenergy::energy
