#pragma once

#include "irenergy/ir/ir.hpp"

#include <map>
#include <string>
#include <vector>

namespace irenergy::hcir {

struct RegularType {
  enum class Kind { Num, Atm, List, Functor };

  Kind kind = Kind::Num;
  std::string name;               // functor name
  std::vector<RegularType> args;  // list element or functor arguments

  static RegularType num() { return {Kind::Num, {}, {}}; }
  static RegularType atm() { return {Kind::Atm, {}, {}}; }
  static RegularType list(RegularType elem);
  static RegularType functor(std::string name, std::vector<RegularType> args);

  bool operator==(const RegularType&) const = default;
};

/// `num`, `list(num)`, `mystruct(num, list(num))`.
std::string to_string(const RegularType& t);

/// Chooses functor names for structure types. Named structs use their
/// definition name with a leading `struct.` dropped; an anonymous struct
/// reuses the name of the first structurally identical named definition and
/// otherwise gets `struct1`, `struct2`, ... Distinct shapes never share a
/// name.
class TypeNamer {
public:
  explicit TypeNamer(const ir::Module* module = nullptr);
  std::string name_for(const ir::TypePtr& t);

private:
  const ir::Module* module_;
  std::vector<std::pair<ir::TypePtr, std::string>> assigned_;
  int anonymous_ = 0;
};

RegularType translate_type(const ir::TypePtr& t, TypeNamer& namer);
RegularType translate_type(const ir::TypePtr& t, const ir::Module* module = nullptr);

} // namespace irenergy::hcir
