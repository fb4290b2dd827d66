#pragma once

#include "irenergy/hcir/regtype.hpp"
#include "irenergy/ir/ir.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace irenergy::interp {

struct ConcreteValue {
  enum class Kind { Int, List, Functor, Atom };

  Kind kind = Kind::Int;
  std::int64_t integer = 0;
  std::string name;  // functor or atom name
  std::vector<ConcreteValue> items;

  static ConcreteValue of(std::int64_t v);
  static ConcreteValue list(std::vector<ConcreteValue> items);
  static ConcreteValue functor(std::string name, std::vector<ConcreteValue> fields);
  static ConcreteValue atom(std::string name);

  bool is_int() const { return kind == Kind::Int; }
  bool is_aggregate() const { return kind == Kind::List || kind == Kind::Functor; }
  bool operator==(const ConcreteValue&) const = default;
};

/// `3`, `[1, 2]`, `bank([0, 0], [1, 2, 3])`.
std::string to_string(const ConcreteValue& v);

bool matches(const ConcreteValue& v, const hcir::RegularType& t);

/// Zero-filled value of the pointee of `t` (or `t` itself when not a
/// pointer). Arbitrary-length arrays get `length` elements.
ConcreteValue zero_value(const ir::TypePtr& t, hcir::TypeNamer& namer, std::size_t length);

// Integer semantics shared by both interpreters. Overflow of the int64
// carrier raises Error("interp").
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_sub(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
/// Both keep the low `width` bits as an unsigned value.
std::int64_t zext_value(std::int64_t v, unsigned width);
std::int64_t trunc_value(std::int64_t v, unsigned width);

} // namespace irenergy::interp
