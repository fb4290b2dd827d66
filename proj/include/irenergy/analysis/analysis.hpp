//===-- analysis.hpp - Cost equations and their solution ----------------===//
//
// Pipeline over an HC program and its clause costs:
//   call graph -> abstract sizes per clause -> one guarded cost equation per
//   predicate -> SCC-wise inlining into a self-recurrence on a ranking
//   argument -> closed form, checked against the equations before reporting.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "irenergy/analysis/symbolic.hpp"
#include "irenergy/energy/model.hpp"
#include "irenergy/hcir/program.hpp"
#include "irenergy/recsolve/solver.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace irenergy::analysis {

struct CallEdge {
  std::string caller;
  std::string callee;
  std::size_t clause = 0;   // index into HCProgram::clauses
  std::size_t literal = 0;  // index into the clause body
};

struct CallGraph {
  std::vector<std::string> nodes;  // every predicate, sorted
  std::vector<CallEdge> edges;     // in clause order
  // Strongly connected components, callees before callers. Members sorted.
  std::vector<std::vector<std::string>> sccs;
  std::map<std::string, std::size_t> scc_of;

  std::set<std::string> callees(const std::string& pred) const;
  /// Member of a multi-predicate SCC or calls itself.
  bool recursive(const std::string& pred) const;
};

/// Tarjan's algorithm; components come callees first, members sorted.
std::vector<std::vector<std::string>> strongly_connected(
    const std::vector<std::string>& nodes, const std::map<std::string, std::set<std::string>>& succ);

/// Throws Error("analysis") on a call to a predicate that has neither
/// clauses nor a trust assertion.
CallGraph build_call_graph(const hcir::HCProgram& p);

/// How the size of an argument is measured.
enum class SizeMetric { IntValue, Length, Structural };
SizeMetric size_metric(const hcir::RegularType& t);

/// Size symbols of a predicate's arguments: the head variables of its first
/// clause when they are distinct variables, else `A0`, `A1`, ...
std::vector<std::string> head_symbols(const hcir::HCProgram& p, const std::string& pred);

/// Input argument sizes of one call literal as affine maps over the caller's
/// head symbols. nullopt is an unknown size.
struct CallSizes {
  std::size_t clause = 0;
  std::size_t literal = 0;
  std::string callee;
  std::vector<std::optional<Affine>> args;
};
std::vector<CallSizes> infer_size_relations(const hcir::HCProgram& p);

struct GuardedEquation {
  std::vector<Condition> guard;
  CostExpr cost;  // a leaf with pending calls, or Unknown
};

/// Cost equations of one predicate before any inlining: clauses are tried in
/// order, so the guards of `equations` are mutually exclusive.
struct PredEquations {
  std::string pred;
  std::vector<std::string> params;
  std::set<std::string> relevant;  // symbols the cost can depend on
  CostExpr expr;
  std::vector<GuardedEquation> equations;
};

struct EquationSystem {
  CallGraph graph;
  std::map<std::string, PredEquations> preds;  // clause-defined, non-test
  std::map<std::string, Rational> external_energy;
  std::set<std::string> externals_without_energy;

  bool relevant_at(const std::string& pred, std::size_t arg) const;
};

EquationSystem extract_recurrences(const hcir::HCProgram& p, const energy::CostMap& costs);

/// Numeric evaluation of the equations, memoized and without inlining.
/// Returns nullopt (with `failure` set) on an unknown cost, a missing symbol
/// or a call cycle that does not make progress.
class EquationEvaluator {
public:
  explicit EquationEvaluator(const EquationSystem& sys, long state_limit = 2'000'000);
  std::optional<Rational> cost(const std::string& pred,
                               const std::map<std::string, Rational>& args);
  const std::string& failure() const { return failure_; }

private:
  using Key = std::pair<std::string, std::vector<std::optional<Rational>>>;
  const EquationSystem& sys_;
  long state_limit_;
  std::map<Key, Rational> memo_;
  std::string failure_;
};

struct Ranking {
  std::size_t index = 0;
  std::string symbol;
  std::set<long> decrements;
};

/// Lowest relevant argument that every self call decreases by a positive
/// constant.
std::optional<Ranking> detect_ranking_argument(const std::vector<std::string>& params,
                                               const std::set<std::string>& relevant,
                                               const std::vector<std::vector<Affine>>& self_calls);

/// Self-recurrence of an SCC header after inlining the rest of its SCC.
struct HeaderRecurrence {
  std::string pred;
  std::optional<Ranking> ranking;
  std::optional<recsolve::Recurrence> recurrence;
  std::optional<recsolve::Solution> solution;  // verified
  std::string failure;
};

struct FunctionReport {
  std::string function;
  std::string entry;
  std::vector<std::string> params;  // size symbols the cost depends on
  std::optional<recsolve::ClosedForm> cost;
  std::string reason;  // why `cost` is missing
};

struct Analysis {
  EquationSystem system;
  std::vector<HeaderRecurrence> headers;  // in solving order
  std::map<std::string, CostExpr> resolved;
  std::vector<FunctionReport> functions;

  const HeaderRecurrence* header(const std::string& pred) const;
  const FunctionReport* function(const std::string& name) const;
};

struct AnalysisOptions {
  // Check points per variable count (1, 2, 3+) for the final comparison of
  // each closed form against the equations.
  long grid_1 = 20, grid_2 = 8, grid_3 = 4;
};

Analysis analyze(const hcir::HCProgram& p, const energy::CostMap& costs,
                 const AnalysisOptions& opts = {});

/// Guarded equations of one predicate, one line each.
std::string print_equations(const EquationSystem& sys, const std::string& pred);

/// Guarded equations per predicate, then each header's recurrence and
/// solution. Format documented in docs/grammar.md.
std::string dump_recurrences(const Analysis& a);

} // namespace irenergy::analysis
