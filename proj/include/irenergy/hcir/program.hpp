//===-- program.hpp - Horn-clause IR ------------------------------------===//
#pragma once

#include "irenergy/hcir/regtype.hpp"
#include "irenergy/support/affine.hpp"
#include "irenergy/support/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace irenergy::hcir {

struct Term {
  bool is_var = false;
  std::string var;
  std::int64_t value = 0;

  static Term v(std::string name) { return {true, std::move(name), 0}; }
  static Term c(std::int64_t value) { return {false, {}, value}; }
  bool operator==(const Term&) const = default;
};

std::string to_string(const Term& t);

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

/// `=`, `\=`, `<`, `=<`, `>`, `>=`.
std::string compare_symbol(CompareOp op);
CompareOp negate(CompareOp op);
bool compare(CompareOp op, std::int64_t a, std::int64_t b);
CompareOp compare_op(ir::CmpPred p);

struct Literal {
  enum class Kind {
    Builtin,  // add/sub/mul/zext/trunc/nth/set_nth/mk_list/ret; result last
    Call,     // predicate call; inputs first, outputs after
    Guard,    // Var=constant
    Compare,  // X op Y, only in comparison predicates
  };

  Kind kind = Kind::Builtin;
  std::string name;
  std::vector<Term> args;
  CompareOp op = CompareOp::Eq;
  // Cost-model keys of the IR instructions this literal stands for.
  std::vector<std::string> origins;

  static Literal builtin(std::string name, std::vector<Term> args,
                         std::vector<std::string> origins = {});
  static Literal call(std::string pred, std::vector<Term> args,
                      std::vector<std::string> origins = {});
  static Literal guard(std::string var, std::int64_t value);
  static Literal test(CompareOp op, Term a, Term b);

  bool is_test() const { return kind == Kind::Guard || kind == Kind::Compare; }
  bool operator==(const Literal&) const = default;
};

struct BlockRef {
  std::string function;
  std::string label;
  std::string to_string() const { return function + ":" + label; }
  auto operator<=>(const BlockRef&) const = default;
};

enum class ClauseKind { Block, Dispatch, Test };

struct Clause {
  std::string pred;
  std::vector<std::string> head;
  std::vector<Literal> body;
  ClauseKind kind = ClauseKind::Block;
  // IR block whose cost this clause carries; none for pure dispatch and
  // comparison clauses.
  std::optional<BlockRef> origin;
  // Cost keys of IR instructions with no literal of their own (phi, branches,
  // ret).
  std::vector<std::string> absorbed;

  bool operator==(const Clause&) const = default;
};

enum class PredKind { Block, Dispatch, Test, External };

struct PredSig {
  std::string name;
  std::size_t arity = 0;
  std::size_t inputs = 0;  // leading input positions; the rest are outputs
  std::vector<RegularType> types;
  PredKind kind = PredKind::Block;
  std::string function;  // owning IR function; empty for comparisons

  bool operator==(const PredSig&) const = default;
};

/// Bound on an argument size: an affine expression over argument sizes
/// (`s0`, `s1`, ...), the element bound of a list argument, or unbounded.
struct SizeExpr {
  enum class Kind { Affine, ElementOf, Infinite };
  Kind kind = Kind::Affine;
  irenergy::Affine affine;
  std::size_t arg = 0;

  std::string to_string() const;
  bool operator==(const SizeExpr& o) const;
};

struct SizeRelation {
  std::size_t arg = 0;
  SizeExpr lower, upper;
  bool operator==(const SizeRelation&) const = default;
};

struct TrustAssertion {
  std::string pred;
  std::size_t arity = 0;
  // nullopt is an unconstrained (var) argument.
  std::vector<std::optional<RegularType>> pre, post;
  std::vector<SizeRelation> sizes;
  // resource(avg, energy, value)
  std::optional<Rational> energy;

  bool operator==(const TrustAssertion&) const = default;
};

struct FunctionInfo {
  std::string name;
  std::string entry;                   // predicate of the entry block
  std::vector<std::string> params;     // head variable per IR parameter
  std::vector<std::size_t> copy_out;   // pointer params written by the function
  bool returns_value = false;

  bool operator==(const FunctionInfo&) const = default;
};

struct HCProgram {
  std::vector<Clause> clauses;
  std::map<std::string, PredSig> preds;
  std::vector<FunctionInfo> functions;
  std::vector<TrustAssertion> assertions;

  const PredSig* find_pred(const std::string& name) const;
  std::vector<const Clause*> clauses_of(const std::string& pred) const;
  const TrustAssertion* find_assertion(const std::string& pred, std::size_t arity) const;
  const FunctionInfo* find_function(const std::string& name) const;
};

struct BuiltinInfo {
  std::size_t inputs;
  std::size_t outputs;
  bool abstract;  // nth/set_nth/mk_list may carry trust assertions
};

/// Builtin literal table; nullptr for anything else.
const BuiltinInfo* builtin_info(const std::string& name);

} // namespace irenergy::hcir
