#include "irenergy/hcir/program.hpp"

namespace irenergy::hcir {

std::string to_string(const Term& t) {
  return t.is_var ? t.var : std::to_string(t.value);
}

std::string compare_symbol(CompareOp op) {
  switch (op) {
  case CompareOp::Eq:
    return "=";
  case CompareOp::Ne:
    return "\\=";
  case CompareOp::Lt:
    return "<";
  case CompareOp::Le:
    return "=<";
  case CompareOp::Gt:
    return ">";
  case CompareOp::Ge:
    return ">=";
  }
  return "?";
}

CompareOp negate(CompareOp op) {
  switch (op) {
  case CompareOp::Eq:
    return CompareOp::Ne;
  case CompareOp::Ne:
    return CompareOp::Eq;
  case CompareOp::Lt:
    return CompareOp::Ge;
  case CompareOp::Le:
    return CompareOp::Gt;
  case CompareOp::Gt:
    return CompareOp::Le;
  case CompareOp::Ge:
    return CompareOp::Lt;
  }
  return op;
}

bool compare(CompareOp op, std::int64_t a, std::int64_t b) {
  switch (op) {
  case CompareOp::Eq:
    return a == b;
  case CompareOp::Ne:
    return a != b;
  case CompareOp::Lt:
    return a < b;
  case CompareOp::Le:
    return a <= b;
  case CompareOp::Gt:
    return a > b;
  case CompareOp::Ge:
    return a >= b;
  }
  return false;
}

CompareOp compare_op(ir::CmpPred p) {
  switch (p) {
  case ir::CmpPred::Eq:
    return CompareOp::Eq;
  case ir::CmpPred::Ne:
    return CompareOp::Ne;
  case ir::CmpPred::Slt:
    return CompareOp::Lt;
  case ir::CmpPred::Sle:
    return CompareOp::Le;
  case ir::CmpPred::Sgt:
    return CompareOp::Gt;
  case ir::CmpPred::Sge:
    return CompareOp::Ge;
  }
  return CompareOp::Eq;
}

Literal Literal::builtin(std::string name, std::vector<Term> args,
                         std::vector<std::string> origins) {
  Literal l;
  l.kind = Kind::Builtin;
  l.name = std::move(name);
  l.args = std::move(args);
  l.origins = std::move(origins);
  return l;
}

Literal Literal::call(std::string pred, std::vector<Term> args, std::vector<std::string> origins) {
  Literal l = builtin(std::move(pred), std::move(args), std::move(origins));
  l.kind = Kind::Call;
  return l;
}

Literal Literal::guard(std::string var, std::int64_t value) {
  Literal l;
  l.kind = Kind::Guard;
  l.args = {Term::v(std::move(var)), Term::c(value)};
  return l;
}

Literal Literal::test(CompareOp op, Term a, Term b) {
  Literal l;
  l.kind = Kind::Compare;
  l.op = op;
  l.args = {std::move(a), std::move(b)};
  return l;
}

std::string SizeExpr::to_string() const {
  switch (kind) {
  case Kind::Affine:
    return affine.to_string();
  case Kind::ElementOf:
    return "elem(" + std::to_string(arg) + ")";
  case Kind::Infinite:
    return "inf";
  }
  return "?";
}

bool SizeExpr::operator==(const SizeExpr& o) const {
  if (kind != o.kind)
    return false;
  if (kind == Kind::Affine)
    return affine == o.affine;
  if (kind == Kind::ElementOf)
    return arg == o.arg;
  return true;
}

const PredSig* HCProgram::find_pred(const std::string& name) const {
  auto it = preds.find(name);
  return it == preds.end() ? nullptr : &it->second;
}

std::vector<const Clause*> HCProgram::clauses_of(const std::string& pred) const {
  std::vector<const Clause*> out;
  for (const auto& c : clauses)
    if (c.pred == pred)
      out.push_back(&c);
  return out;
}

const TrustAssertion* HCProgram::find_assertion(const std::string& pred,
                                                std::size_t arity) const {
  for (const auto& a : assertions)
    if (a.pred == pred && a.arity == arity)
      return &a;
  return nullptr;
}

const FunctionInfo* HCProgram::find_function(const std::string& name) const {
  for (const auto& f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

const BuiltinInfo* builtin_info(const std::string& name) {
  static const std::map<std::string, BuiltinInfo> table = {
      {"add", {2, 1, false}},    {"sub", {2, 1, false}},     {"mul", {2, 1, false}},
      {"zext", {2, 1, false}},   {"trunc", {2, 1, false}},   {"ret", {1, 1, false}},
      {"nth", {2, 1, true}},     {"set_nth", {3, 1, true}},  {"mk_list", {1, 1, true}},
  };
  auto it = table.find(name);
  return it == table.end() ? nullptr : &it->second;
}

} // namespace irenergy::hcir
