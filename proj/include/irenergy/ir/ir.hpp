//===-- ir.hpp - Restricted SSA IR data model ----------------------------===//
#pragma once

#include "irenergy/support/error.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace irenergy::ir {

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class Kind { Integer, Array, Struct, Pointer, Void, Label };

  Kind kind = Kind::Void;
  unsigned width = 0;
  // Arrays only. nullopt is the arbitrary-length `[0 x T]` form.
  std::optional<std::uint64_t> length;
  // Array element or pointer pointee.
  TypePtr element;
  std::vector<TypePtr> fields;
  // Named structs keep their definition name without the leading '%'.
  std::string name;

  bool is_integer() const { return kind == Kind::Integer; }
  bool is_pointer() const { return kind == Kind::Pointer; }
  bool is_aggregate() const {
    return kind == Kind::Array || kind == Kind::Struct;
  }
};

TypePtr make_int(unsigned width);
TypePtr make_array(std::optional<std::uint64_t> length, TypePtr element);
TypePtr make_struct(std::vector<TypePtr> fields, std::string name = {});
TypePtr make_pointer(TypePtr pointee);
TypePtr make_void();
TypePtr make_label();

/// Structural equality including struct names.
bool operator==(const Type& a, const Type& b);
bool same_type(const TypePtr& a, const TypePtr& b);
/// Structural equality that ignores struct names.
bool same_shape(const TypePtr& a, const TypePtr& b);

/// Textual spelling; named structs print as `%name`.
std::string to_string(const Type& t);
std::string to_string(const TypePtr& t);

struct Value {
  enum class Kind { Register, Constant };
  Kind kind = Kind::Constant;
  std::string name;  // register name without '%'
  std::int64_t constant = 0;

  static Value reg(std::string name);
  static Value imm(std::int64_t v);
  bool is_register() const { return kind == Kind::Register; }
  bool operator==(const Value&) const = default;
};

std::string to_string(const Value& v);

enum class Opcode {
  Phi,
  Add,
  Sub,
  Mul,
  ICmp,
  ZExt,
  Trunc,
  Alloca,
  Load,
  Store,
  GetElementPtr,
  Call,
  Br,
  BrCond,
  Ret,
};

enum class CmpPred { Eq, Ne, Slt, Sle, Sgt, Sge };

std::string opcode_name(Opcode op);
std::string cmp_name(CmpPred p);
/// Cost-model key: "icmp_ne" for comparisons, "br_cond", otherwise the opcode.
std::string cost_key(Opcode op, CmpPred p = CmpPred::Eq);
bool is_terminator(Opcode op);

struct BranchTarget {
  std::string label;
  // Populated after phi elimination.
  std::vector<Value> args;
  std::vector<TypePtr> arg_types;
  bool operator==(const BranchTarget& o) const;
};

struct Instruction {
  Opcode op = Opcode::Ret;
  std::optional<std::string> result;
  // Result type; void when there is no result.
  TypePtr type;
  std::vector<Value> operands;
  // Parallel to `operands`.
  std::vector<TypePtr> operand_types;
  // Allocated type for alloca, source element type for getelementptr.
  TypePtr elem_type;
  CmpPred pred = CmpPred::Eq;
  // Phi only, parallel to `operands`.
  std::vector<std::string> incoming;
  std::string callee;
  std::vector<BranchTarget> targets;
  Location loc;

  bool operator==(const Instruction& o) const;
};

struct Param {
  std::string name;
  TypePtr type;
  bool operator==(const Param& o) const;
};

struct Block {
  std::string label;
  // Non-empty only after phi elimination.
  std::vector<Param> params;
  // The terminator, when present, is the last instruction.
  std::vector<Instruction> instructions;
  Location loc;

  const Instruction* terminator() const;
  bool operator==(const Block& o) const;
};

struct Function {
  std::string name;
  std::vector<Param> params;
  TypePtr ret_type;
  std::vector<Block> blocks;
  Location loc;

  const Block* find_block(const std::string& label) const;
  int block_index(const std::string& label) const;
  bool operator==(const Function& o) const;
};

/// External function; callable only when the energy model trusts it.
struct Declaration {
  std::string name;
  TypePtr ret_type;
  std::vector<TypePtr> param_types;
  bool operator==(const Declaration& o) const;
};

struct Module {
  std::vector<Function> functions;
  std::vector<Declaration> declarations;
  // Named struct definitions in source order.
  std::vector<std::pair<std::string, TypePtr>> named_types;

  const Function* find_function(const std::string& name) const;
  const Declaration* find_declaration(const std::string& name) const;
  TypePtr find_type(const std::string& name) const;
  bool operator==(const Module& o) const;
};

struct DefRef {
  std::set<std::string> def;
  std::set<std::string> ref;
};

/// Registers written and read by one instruction. Branch arguments count as
/// reads of the branching instruction.
DefRef def_ref(const Instruction& inst);

/// Type of the value selected by a getelementptr index path, starting from
/// the pointee. Throws on an invalid path.
TypePtr gep_result_pointee(const TypePtr& pointee,
                           const std::vector<Value>& indices);

} // namespace irenergy::ir
