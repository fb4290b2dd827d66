#include "irenergy/ir/ir.hpp"

namespace irenergy::ir {

TypePtr make_int(unsigned width) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Kind::Integer;
  t->width = width;
  return t;
}

TypePtr make_array(std::optional<std::uint64_t> length, TypePtr element) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Kind::Array;
  t->length = length;
  t->element = std::move(element);
  return t;
}

TypePtr make_struct(std::vector<TypePtr> fields, std::string name) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Kind::Struct;
  t->fields = std::move(fields);
  t->name = std::move(name);
  return t;
}

TypePtr make_pointer(TypePtr pointee) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Kind::Pointer;
  t->element = std::move(pointee);
  return t;
}

TypePtr make_void() {
  static const TypePtr v = [] {
    auto t = std::make_shared<Type>();
    t->kind = Type::Kind::Void;
    return t;
  }();
  return v;
}

TypePtr make_label() {
  static const TypePtr l = [] {
    auto t = std::make_shared<Type>();
    t->kind = Type::Kind::Label;
    return t;
  }();
  return l;
}

namespace {

bool equal(const Type& a, const Type& b, bool names) {
  if (a.kind != b.kind)
    return false;
  switch (a.kind) {
  case Type::Kind::Integer:
    return a.width == b.width;
  case Type::Kind::Array:
    return a.length == b.length && equal(*a.element, *b.element, names);
  case Type::Kind::Pointer:
    return equal(*a.element, *b.element, names);
  case Type::Kind::Struct:
    if (names && a.name != b.name)
      return false;
    if (a.fields.size() != b.fields.size())
      return false;
    for (std::size_t i = 0; i < a.fields.size(); ++i)
      if (!equal(*a.fields[i], *b.fields[i], names))
        return false;
    return true;
  case Type::Kind::Void:
  case Type::Kind::Label:
    return true;
  }
  return false;
}

} // namespace

bool operator==(const Type& a, const Type& b) { return equal(a, b, true); }

bool same_type(const TypePtr& a, const TypePtr& b) {
  if (!a || !b)
    return !a && !b;
  return *a == *b;
}

bool same_shape(const TypePtr& a, const TypePtr& b) {
  if (!a || !b)
    return !a && !b;
  return equal(*a, *b, false);
}

std::string to_string(const Type& t) {
  switch (t.kind) {
  case Type::Kind::Integer:
    return "i" + std::to_string(t.width);
  case Type::Kind::Array:
    return "[" + std::to_string(t.length.value_or(0)) + " x " +
           to_string(*t.element) + "]";
  case Type::Kind::Pointer:
    return to_string(*t.element) + "*";
  case Type::Kind::Struct: {
    if (!t.name.empty())
      return "%" + t.name;
    if (t.fields.empty())
      return "{}";
    std::string out = "{ ";
    for (std::size_t i = 0; i < t.fields.size(); ++i) {
      if (i)
        out += ", ";
      out += to_string(*t.fields[i]);
    }
    return out + " }";
  }
  case Type::Kind::Void:
    return "void";
  case Type::Kind::Label:
    return "label";
  }
  return "?";
}

std::string to_string(const TypePtr& t) { return t ? to_string(*t) : "<null>"; }

Value Value::reg(std::string name) {
  Value v;
  v.kind = Kind::Register;
  v.name = std::move(name);
  return v;
}

Value Value::imm(std::int64_t c) {
  Value v;
  v.kind = Kind::Constant;
  v.constant = c;
  return v;
}

std::string to_string(const Value& v) {
  return v.is_register() ? "%" + v.name : std::to_string(v.constant);
}

std::string opcode_name(Opcode op) {
  switch (op) {
  case Opcode::Phi: return "phi";
  case Opcode::Add: return "add";
  case Opcode::Sub: return "sub";
  case Opcode::Mul: return "mul";
  case Opcode::ICmp: return "icmp";
  case Opcode::ZExt: return "zext";
  case Opcode::Trunc: return "trunc";
  case Opcode::Alloca: return "alloca";
  case Opcode::Load: return "load";
  case Opcode::Store: return "store";
  case Opcode::GetElementPtr: return "getelementptr";
  case Opcode::Call: return "call";
  case Opcode::Br: return "br";
  case Opcode::BrCond: return "br_cond";
  case Opcode::Ret: return "ret";
  }
  return "?";
}

std::string cmp_name(CmpPred p) {
  switch (p) {
  case CmpPred::Eq: return "eq";
  case CmpPred::Ne: return "ne";
  case CmpPred::Slt: return "slt";
  case CmpPred::Sle: return "sle";
  case CmpPred::Sgt: return "sgt";
  case CmpPred::Sge: return "sge";
  }
  return "?";
}

std::string cost_key(Opcode op, CmpPred p) {
  if (op == Opcode::ICmp)
    return "icmp_" + cmp_name(p);
  return opcode_name(op);
}

bool is_terminator(Opcode op) {
  return op == Opcode::Br || op == Opcode::BrCond || op == Opcode::Ret;
}

namespace {

bool same_types(const std::vector<TypePtr>& a, const std::vector<TypePtr>& b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_type(a[i], b[i]))
      return false;
  return true;
}

} // namespace

bool BranchTarget::operator==(const BranchTarget& o) const {
  return label == o.label && args == o.args && same_types(arg_types, o.arg_types);
}

// Locations are deliberately excluded: a reprinted module has different lines.
bool Instruction::operator==(const Instruction& o) const {
  return op == o.op && result == o.result && same_type(type, o.type) &&
         operands == o.operands && same_types(operand_types, o.operand_types) &&
         same_type(elem_type, o.elem_type) && pred == o.pred &&
         incoming == o.incoming && callee == o.callee && targets == o.targets;
}

bool Param::operator==(const Param& o) const {
  return name == o.name && same_type(type, o.type);
}

const Instruction* Block::terminator() const {
  if (instructions.empty() || !is_terminator(instructions.back().op))
    return nullptr;
  return &instructions.back();
}

bool Block::operator==(const Block& o) const {
  return label == o.label && params == o.params && instructions == o.instructions;
}

const Block* Function::find_block(const std::string& label) const {
  int i = block_index(label);
  return i < 0 ? nullptr : &blocks[static_cast<std::size_t>(i)];
}

int Function::block_index(const std::string& label) const {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (blocks[i].label == label)
      return static_cast<int>(i);
  return -1;
}

bool Function::operator==(const Function& o) const {
  return name == o.name && params == o.params && same_type(ret_type, o.ret_type) &&
         blocks == o.blocks;
}

bool Declaration::operator==(const Declaration& o) const {
  return name == o.name && same_type(ret_type, o.ret_type) &&
         same_types(param_types, o.param_types);
}

const Function* Module::find_function(const std::string& name) const {
  for (const auto& f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

const Declaration* Module::find_declaration(const std::string& name) const {
  for (const auto& d : declarations)
    if (d.name == name)
      return &d;
  return nullptr;
}

TypePtr Module::find_type(const std::string& name) const {
  for (const auto& [n, t] : named_types)
    if (n == name)
      return t;
  return nullptr;
}

bool Module::operator==(const Module& o) const {
  if (functions != o.functions || declarations != o.declarations)
    return false;
  if (named_types.size() != o.named_types.size())
    return false;
  for (std::size_t i = 0; i < named_types.size(); ++i)
    if (named_types[i].first != o.named_types[i].first ||
        !same_type(named_types[i].second, o.named_types[i].second))
      return false;
  return true;
}

DefRef def_ref(const Instruction& inst) {
  DefRef out;
  if (inst.result)
    out.def.insert(*inst.result);
  for (const auto& v : inst.operands)
    if (v.is_register())
      out.ref.insert(v.name);
  for (const auto& t : inst.targets)
    for (const auto& v : t.args)
      if (v.is_register())
        out.ref.insert(v.name);
  return out;
}

TypePtr gep_result_pointee(const TypePtr& pointee,
                           const std::vector<Value>& indices) {
  TypePtr cur = pointee;
  for (const auto& idx : indices) {
    if (cur->kind == Type::Kind::Array) {
      cur = cur->element;
    } else if (cur->kind == Type::Kind::Struct) {
      if (idx.is_register())
        throw Error("type", "struct field index must be a constant");
      if (idx.constant < 0 ||
          static_cast<std::size_t>(idx.constant) >= cur->fields.size())
        throw Error("type", "struct field index " + std::to_string(idx.constant) +
                                " out of range for " + to_string(cur));
      cur = cur->fields[static_cast<std::size_t>(idx.constant)];
    } else {
      throw Error("type", "cannot index into " + to_string(cur));
    }
  }
  return cur;
}

} // namespace irenergy::ir
