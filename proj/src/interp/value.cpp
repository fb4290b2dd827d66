#include "irenergy/interp/value.hpp"

#include "irenergy/support/error.hpp"

namespace irenergy::interp {

ConcreteValue ConcreteValue::of(std::int64_t v) {
  ConcreteValue c;
  c.integer = v;
  return c;
}

ConcreteValue ConcreteValue::list(std::vector<ConcreteValue> items) {
  ConcreteValue c;
  c.kind = Kind::List;
  c.items = std::move(items);
  return c;
}

ConcreteValue ConcreteValue::functor(std::string name, std::vector<ConcreteValue> fields) {
  ConcreteValue c;
  c.kind = Kind::Functor;
  c.name = std::move(name);
  c.items = std::move(fields);
  return c;
}

ConcreteValue ConcreteValue::atom(std::string name) {
  ConcreteValue c;
  c.kind = Kind::Atom;
  c.name = std::move(name);
  return c;
}

std::string to_string(const ConcreteValue& v) {
  switch (v.kind) {
  case ConcreteValue::Kind::Int:
    return std::to_string(v.integer);
  case ConcreteValue::Kind::Atom:
    return v.name;
  case ConcreteValue::Kind::List:
  case ConcreteValue::Kind::Functor: {
    std::string out = v.kind == ConcreteValue::Kind::List ? "[" : v.name + "(";
    for (std::size_t i = 0; i < v.items.size(); ++i)
      out += (i ? ", " : "") + to_string(v.items[i]);
    return out + (v.kind == ConcreteValue::Kind::List ? "]" : ")");
  }
  }
  return "?";
}

bool matches(const ConcreteValue& v, const hcir::RegularType& t) {
  using K = hcir::RegularType::Kind;
  switch (t.kind) {
  case K::Num:
    return v.is_int();
  case K::Atm:
    return v.kind == ConcreteValue::Kind::Atom;
  case K::List:
    if (v.kind != ConcreteValue::Kind::List)
      return false;
    for (const auto& x : v.items)
      if (!matches(x, t.args[0]))
        return false;
    return true;
  case K::Functor:
    if (v.kind != ConcreteValue::Kind::Functor || v.name != t.name ||
        v.items.size() != t.args.size())
      return false;
    for (std::size_t i = 0; i < v.items.size(); ++i)
      if (!matches(v.items[i], t.args[i]))
        return false;
    return true;
  }
  return false;
}

ConcreteValue zero_value(const ir::TypePtr& t, hcir::TypeNamer& namer, std::size_t length) {
  switch (t->kind) {
  case ir::Type::Kind::Pointer:
    return zero_value(t->element, namer, length);
  case ir::Type::Kind::Array: {
    std::size_t n = t->length ? static_cast<std::size_t>(*t->length) : length;
    return ConcreteValue::list(
        std::vector<ConcreteValue>(n, zero_value(t->element, namer, length)));
  }
  case ir::Type::Kind::Struct: {
    std::vector<ConcreteValue> fields;
    for (const auto& f : t->fields)
      fields.push_back(zero_value(f, namer, length));
    return ConcreteValue::functor(namer.name_for(t), std::move(fields));
  }
  case ir::Type::Kind::Integer:
    return ConcreteValue::of(0);
  default:
    return ConcreteValue::atom("void");
  }
}

namespace {
[[noreturn]] void overflow() { throw Error("interp", "integer overflow"); }
} // namespace

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    overflow();
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r))
    overflow();
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    overflow();
  return r;
}

std::int64_t zext_value(std::int64_t v, unsigned width) {
  if (width >= 63)
    return v;
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(v) & ((std::uint64_t{1} << width) - 1));
}

std::int64_t trunc_value(std::int64_t v, unsigned width) { return zext_value(v, width); }

} // namespace irenergy::interp
