#include "irenergy/hcir/regtype.hpp"

#include <cctype>
#include <set>

namespace irenergy::hcir {

namespace {

const std::set<std::string> kReserved = {"num", "atm", "list"};

std::string sanitize_functor(std::string name) {
  if (name.rfind("struct.", 0) == 0)
    name = name.substr(7);
  for (char& c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      c = '_';
  if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0])) ||
      std::isupper(static_cast<unsigned char>(name[0])) || kReserved.count(name))
    name = "s_" + name;
  return name;
}

} // namespace

RegularType RegularType::list(RegularType elem) {
  return {Kind::List, {}, {std::move(elem)}};
}

RegularType RegularType::functor(std::string name, std::vector<RegularType> args) {
  return {Kind::Functor, std::move(name), std::move(args)};
}

std::string to_string(const RegularType& t) {
  switch (t.kind) {
  case RegularType::Kind::Num:
    return "num";
  case RegularType::Kind::Atm:
    return "atm";
  case RegularType::Kind::List:
    return "list(" + to_string(t.args[0]) + ")";
  case RegularType::Kind::Functor: {
    if (t.args.empty())
      return t.name;
    std::string out = t.name + "(";
    for (std::size_t i = 0; i < t.args.size(); ++i)
      out += (i ? ", " : "") + to_string(t.args[i]);
    return out + ")";
  }
  }
  return "?";
}

TypeNamer::TypeNamer(const ir::Module* module) : module_(module) {}

std::string TypeNamer::name_for(const ir::TypePtr& t) {
  for (const auto& [type, name] : assigned_)
    if (ir::same_type(type, t))
      return name;
  std::string name;
  if (!t->name.empty()) {
    name = sanitize_functor(t->name);
  } else if (module_) {
    for (const auto& [def_name, def] : module_->named_types)
      if (ir::same_shape(def, t)) {
        name = sanitize_functor(def_name);
        break;
      }
  }
  auto taken = [&](const std::string& n) {
    for (const auto& [type, other] : assigned_)
      if (other == n && !ir::same_shape(type, t))
        return true;
    return false;
  };
  if (name.empty() || taken(name)) {
    std::string base = name.empty() ? "struct" : name;
    do {
      name = base + std::to_string(++anonymous_);
    } while (taken(name));
  }
  assigned_.push_back({t, name});
  return name;
}

RegularType translate_type(const ir::TypePtr& t, TypeNamer& namer) {
  using K = ir::Type::Kind;
  switch (t->kind) {
  case K::Integer:
    return RegularType::num();
  case K::Void:
  case K::Label:
    return RegularType::atm();
  case K::Array:
    return RegularType::list(translate_type(t->element, namer));
  case K::Pointer:
    return translate_type(t->element, namer);
  case K::Struct: {
    std::vector<RegularType> args;
    for (const auto& f : t->fields)
      args.push_back(translate_type(f, namer));
    return RegularType::functor(namer.name_for(t), std::move(args));
  }
  }
  throw Error("translate", "unsupported type " + ir::to_string(t));
}

RegularType translate_type(const ir::TypePtr& t, const ir::Module* module) {
  TypeNamer namer(module);
  return translate_type(t, namer);
}

} // namespace irenergy::hcir
