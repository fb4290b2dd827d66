// Symbolic sizes and guarded cost expressions over predicate head symbols.
#pragma once

#include "irenergy/hcir/program.hpp"
#include "irenergy/recsolve/closed_form.hpp"
#include "irenergy/support/affine.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace irenergy::analysis {

/// `d = 0` or `d < 0` over integer symbols. Normalized so the first
/// coefficient of `d` is positive; see make_condition.
struct Atom {
  enum class Kind { Eq, Lt };
  Kind kind = Kind::Eq;
  Affine d;

  bool eval(const std::map<std::string, Rational>& env) const;
  std::string to_string() const;
  bool operator==(const Atom& o) const { return kind == o.kind && d == o.d; }
  bool operator<(const Atom& o) const;
};

/// An atom or its negation.
struct Condition {
  Atom atom;
  bool positive = true;

  bool eval(const std::map<std::string, Rational>& env) const;
  std::optional<bool> constant() const;
  std::string to_string() const;
  bool operator==(const Condition& o) const {
    return atom == o.atom && positive == o.positive;
  }
  bool operator<(const Condition& o) const;
};

Condition make_condition(hcir::CompareOp op, const Affine& lhs, const Affine& rhs);
Condition negate(Condition c);

/// Abstract value of an HC variable: an affine size, the 0/1 outcome of a
/// comparison, or unknown.
struct SymVal {
  enum class Kind { Affine, Cmp, Top };
  Kind kind = Kind::Top;
  Affine value;
  Condition cond;

  static SymVal affine(Affine a);
  static SymVal cmp(Condition c);
  static SymVal top();
  std::set<std::string> symbols() const;
  std::string to_string() const;
  bool operator==(const SymVal& o) const;
  bool operator<(const SymVal& o) const;
};

/// Call whose cost is not yet known, with abstract arguments.
struct PendingCall {
  std::string pred;
  std::vector<SymVal> args;
  bool operator==(const PendingCall& o) const { return pred == o.pred && args == o.args; }
  bool operator<(const PendingCall& o) const;
};

/// Guarded cost: a tree of conditions with cost leaves. Leaves are a closed
/// form (possibly holding opaque calls) plus pending calls. Unknown leaves
/// carry the reason the cost could not be determined.
class CostExpr {
public:
  enum class Kind { Leaf, Cond, Unknown };

  static CostExpr leaf(recsolve::ClosedForm form, std::vector<PendingCall> pending = {});
  static CostExpr unknown(std::string reason);
  static CostExpr cond(const Condition& c, CostExpr then, CostExpr otherwise);

  CostExpr() : CostExpr(leaf(recsolve::ClosedForm())) {}

  Kind kind() const { return node_->kind; }
  const recsolve::ClosedForm& form() const { return node_->form; }
  const std::vector<PendingCall>& pending() const { return node_->pending; }
  const Atom& atom() const { return node_->atom; }
  const CostExpr& then() const { return *node_->then; }
  const CostExpr& otherwise() const { return *node_->otherwise; }
  const std::string& reason() const { return node_->reason; }

  bool operator==(const CostExpr& o) const;
  std::string to_string() const;

private:
  struct Node {
    Kind kind = Kind::Leaf;
    recsolve::ClosedForm form;
    std::vector<PendingCall> pending;
    Atom atom;
    std::shared_ptr<const CostExpr> then, otherwise;
    std::string reason;
  };
  explicit CostExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

CostExpr operator+(const CostExpr& a, const CostExpr& b);

/// Drops branches decided by enclosing conditions or constant atoms and
/// merges conditions whose branches coincide.
CostExpr simplify(const CostExpr& e);

/// Symbols mentioned by conditions, leaf forms and pending call arguments.
std::set<std::string> free_symbols(const CostExpr& e);

/// Simultaneous substitution. A comparison may only replace a symbol tested
/// against 0 or 1; an unknown value may not replace a symbol that is used.
/// Either violation yields an Unknown leaf.
CostExpr substitute(const CostExpr& e, const std::map<std::string, SymVal>& env);

/// Rewrites every leaf.
template <typename F> CostExpr map_leaves(const CostExpr& e, F&& f) {
  switch (e.kind()) {
  case CostExpr::Kind::Leaf:
    return f(e);
  case CostExpr::Kind::Unknown:
    return e;
  case CostExpr::Kind::Cond:
    return CostExpr::cond(Condition{e.atom(), true}, map_leaves(e.then(), f),
                          map_leaves(e.otherwise(), f));
  }
  return e;
}

/// Root-to-leaf paths.
struct Case {
  std::vector<Condition> path;
  CostExpr leaf;  // Leaf or Unknown
};
std::vector<Case> flatten(const CostExpr& e);

} // namespace irenergy::analysis
