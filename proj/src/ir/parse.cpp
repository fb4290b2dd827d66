#include "irenergy/ir/parse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

namespace irenergy::ir {

namespace {

enum class Tok { Local, Global, Ident, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Location loc;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '$' || c == '-';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == ';') {
      while (i < src.size() && src[i] != '\n')
        advance(1);
      continue;
    }
    Token t;
    t.loc = {line, col};
    if (c == '%' || c == '@') {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j]))
        ++j;
      if (j == i + 1)
        throw Error("parse", std::string("expected a name after '") + c + "'", t.loc);
      t.kind = c == '%' ? Tok::Local : Tok::Global;
      t.text = std::string(src.substr(i + 1, j - i - 1));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < src.size() &&
                std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i + 1;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
               c == '$') {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j]))
        ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::string_view("=,()[]{}*:").find(c) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw Error("parse", std::string("unexpected character '") + c + "'", t.loc);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.loc = {line, col};
  out.push_back(end);
  return out;
}

const std::map<std::string, Opcode>& value_opcodes() {
  static const std::map<std::string, Opcode> m = {
      {"phi", Opcode::Phi},       {"add", Opcode::Add},
      {"sub", Opcode::Sub},       {"mul", Opcode::Mul},
      {"icmp", Opcode::ICmp},     {"zext", Opcode::ZExt},
      {"trunc", Opcode::Trunc},   {"alloca", Opcode::Alloca},
      {"load", Opcode::Load},     {"getelementptr", Opcode::GetElementPtr},
      {"call", Opcode::Call},
  };
  return m;
}

std::optional<CmpPred> parse_cmp(const std::string& s) {
  static const std::map<std::string, CmpPred> m = {
      {"eq", CmpPred::Eq},   {"ne", CmpPred::Ne},   {"slt", CmpPred::Slt},
      {"sle", CmpPred::Sle}, {"sgt", CmpPred::Sgt}, {"sge", CmpPred::Sge},
  };
  auto it = m.find(s);
  if (it == m.end())
    return std::nullopt;
  return it->second;
}

class Parser {
public:
  Parser(std::string_view src, Module& module) : toks_(lex(src)), m_(module) {}

  void parse_module() {
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Local)
        parse_typedef();
      else if (is_ident("define"))
        m_.functions.push_back(parse_define());
      else if (is_ident("declare"))
        m_.declarations.push_back(parse_declare());
      else
        fail("expected 'define', 'declare' or a type definition");
    }
    check_names();
  }

  TypePtr parse_type() {
    TypePtr t;
    const Token& tok = peek();
    if (tok.kind == Tok::Ident && tok.text.size() > 1 && tok.text[0] == 'i' &&
        std::all_of(tok.text.begin() + 1, tok.text.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      unsigned width = 0;
      auto res = std::from_chars(tok.text.data() + 1, tok.text.data() + tok.text.size(), width);
      if (res.ec != std::errc() || width == 0 || width > 64)
        fail("unsupported integer width '" + tok.text + "'");
      next();
      t = make_int(width);
    } else if (is_ident("void")) {
      next();
      t = make_void();
    } else if (is_ident("label")) {
      next();
      t = make_label();
    } else if (is_punct("[")) {
      next();
      std::uint64_t n = parse_uint("array length");
      expect_ident("x");
      TypePtr elem = parse_type();
      if (elem->kind == Type::Kind::Void || elem->kind == Type::Kind::Label)
        fail("array of " + to_string(elem));
      expect("]");
      t = make_array(n == 0 ? std::nullopt : std::optional<std::uint64_t>(n), elem);
    } else if (is_punct("{")) {
      next();
      std::vector<TypePtr> fields;
      if (!is_punct("}")) {
        fields.push_back(parse_type());
        while (is_punct(",")) {
          next();
          fields.push_back(parse_type());
        }
      }
      expect("}");
      t = make_struct(std::move(fields));
    } else if (tok.kind == Tok::Local) {
      t = m_.find_type(tok.text);
      if (!t)
        fail("undefined type %" + tok.text);
      next();
    } else if (tok.kind == Tok::Ident) {
      fail("unsupported type '" + tok.text + "'");
    } else {
      fail("expected a type");
    }
    while (is_punct("*")) {
      if (t->kind == Type::Kind::Void || t->kind == Type::Kind::Label)
        fail("pointer to " + to_string(t));
      next();
      t = make_pointer(t);
    }
    return t;
  }

  bool at_end() const { return peek().kind == Tok::End; }
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Module& m_;

  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool is_punct(const char* p) const {
    return peek().kind == Tok::Punct && peek().text == p;
  }
  bool is_ident(const char* s) const {
    return peek().kind == Tok::Ident && peek().text == s;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("parse", msg, peek().loc);
  }
  void expect(const char* p) {
    if (!is_punct(p))
      fail(std::string("expected '") + p + "'" + found());
    next();
  }
  void expect_ident(const char* s) {
    if (!is_ident(s))
      fail(std::string("expected '") + s + "'" + found());
    next();
  }
  std::string found() const {
    if (peek().kind == Tok::End)
      return " but reached end of input";
    return " but found '" + peek().text + "'";
  }
  std::string expect_local() {
    if (peek().kind != Tok::Local)
      fail("expected a register" + found());
    return next().text;
  }
  std::uint64_t parse_uint(const char* what) {
    if (peek().kind != Tok::Int || peek().text[0] == '-')
      fail(std::string("expected ") + what + found());
    std::uint64_t v = 0;
    const auto& s = peek().text;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc())
      fail(std::string(what) + " out of range");
    next();
    return v;
  }

  Value parse_value() {
    if (peek().kind == Tok::Local)
      return Value::reg(next().text);
    if (peek().kind == Tok::Int) {
      std::int64_t v = 0;
      const auto& s = peek().text;
      auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc())
        fail("integer constant out of range");
      next();
      return Value::imm(v);
    }
    if (is_ident("true") || is_ident("false")) {
      bool b = peek().text == "true";
      next();
      return Value::imm(b ? 1 : 0);
    }
    fail("expected a register or integer constant" + found());
  }

  void parse_typedef() {
    Location loc = peek().loc;
    std::string name = next().text;
    expect("=");
    expect_ident("type");
    if (m_.find_type(name))
      throw Error("parse", "duplicate type %" + name, loc);
    TypePtr body = parse_type();
    if (body->kind != Type::Kind::Struct || !body->name.empty())
      throw Error("parse", "named type %" + name + " must be a literal struct", loc);
    m_.named_types.emplace_back(name, make_struct(body->fields, name));
  }

  Declaration parse_declare() {
    next();
    Declaration d;
    d.ret_type = parse_type();
    if (peek().kind != Tok::Global)
      fail("expected a function name" + found());
    d.name = next().text;
    expect("(");
    if (!is_punct(")")) {
      d.param_types.push_back(parse_type());
      while (is_punct(",")) {
        next();
        d.param_types.push_back(parse_type());
      }
    }
    expect(")");
    return d;
  }

  std::vector<Param> parse_params() {
    std::vector<Param> params;
    expect("(");
    if (!is_punct(")")) {
      do {
        if (is_punct(","))
          next();
        Param p;
        p.type = parse_type();
        p.name = expect_local();
        params.push_back(std::move(p));
      } while (is_punct(","));
    }
    expect(")");
    return params;
  }

  Function parse_define() {
    Function f;
    f.loc = peek().loc;
    next();
    f.ret_type = parse_type();
    if (peek().kind != Tok::Global)
      fail("expected a function name" + found());
    f.name = next().text;
    f.params = parse_params();
    expect("{");
    while (!is_punct("}")) {
      if (at_end())
        fail("unterminated function body");
      f.blocks.push_back(parse_block());
    }
    next();
    if (f.blocks.empty())
      throw Error("parse", "function @" + f.name + " has no blocks", f.loc);
    return f;
  }

  bool at_block_start() const {
    return peek().kind == Tok::Ident &&
           peek(1).kind == Tok::Punct && (peek(1).text == ":" || peek(1).text == "(");
  }

  Block parse_block() {
    Block b;
    b.loc = peek().loc;
    if (!at_block_start())
      fail("expected a block label" + found());
    b.label = next().text;
    if (is_punct("("))
      b.params = parse_params();
    expect(":");
    while (!is_punct("}") && !at_block_start()) {
      if (at_end())
        fail("unterminated function body");
      b.instructions.push_back(parse_instruction());
    }
    return b;
  }

  BranchTarget parse_target() {
    expect_ident("label");
    BranchTarget t;
    t.label = expect_local();
    if (is_punct("(")) {
      next();
      if (!is_punct(")")) {
        do {
          if (is_punct(","))
            next();
          t.arg_types.push_back(parse_type());
          t.args.push_back(parse_value());
        } while (is_punct(","));
      }
      expect(")");
    }
    return t;
  }

  void parse_call_tail(Instruction& in) {
    in.type = parse_type();
    if (peek().kind != Tok::Global)
      fail("expected a function name" + found());
    in.callee = next().text;
    expect("(");
    if (!is_punct(")")) {
      do {
        if (is_punct(","))
          next();
        in.operand_types.push_back(parse_type());
        in.operands.push_back(parse_value());
      } while (is_punct(","));
    }
    expect(")");
  }

  Instruction parse_instruction() {
    Instruction in;
    in.loc = peek().loc;
    if (peek().kind == Tok::Local) {
      in.result = next().text;
      expect("=");
      if (peek().kind != Tok::Ident)
        fail("expected an opcode" + found());
      auto it = value_opcodes().find(peek().text);
      if (it == value_opcodes().end())
        fail("unknown opcode '" + peek().text + "'");
      in.op = it->second;
      next();
      parse_value_instruction(in);
      return in;
    }
    if (peek().kind != Tok::Ident)
      fail("expected an instruction" + found());
    std::string op = next().text;
    if (op == "store") {
      in.op = Opcode::Store;
      in.type = make_void();
      in.operand_types.push_back(parse_type());
      in.operands.push_back(parse_value());
      expect(",");
      in.operand_types.push_back(parse_type());
      in.operands.push_back(parse_value());
    } else if (op == "br") {
      in.type = make_void();
      if (is_ident("label")) {
        in.op = Opcode::Br;
        in.targets.push_back(parse_target());
      } else {
        in.op = Opcode::BrCond;
        in.operand_types.push_back(parse_type());
        in.operands.push_back(parse_value());
        expect(",");
        in.targets.push_back(parse_target());
        expect(",");
        in.targets.push_back(parse_target());
      }
    } else if (op == "ret") {
      in.op = Opcode::Ret;
      in.type = make_void();
      if (is_ident("void")) {
        next();
      } else {
        in.operand_types.push_back(parse_type());
        in.operands.push_back(parse_value());
      }
    } else if (op == "call") {
      in.op = Opcode::Call;
      parse_call_tail(in);
      if (in.type->kind != Type::Kind::Void)
        throw Error("parse", "result of non-void call must be assigned", in.loc);
    } else if (value_opcodes().count(op)) {
      throw Error("parse", "'" + op + "' needs a result register", in.loc);
    } else {
      throw Error("parse", "unknown opcode '" + op + "'", in.loc);
    }
    return in;
  }

  void parse_value_instruction(Instruction& in) {
    switch (in.op) {
    case Opcode::Add:
    case Opcode::Sub:
    case Opcode::Mul: {
      TypePtr t = parse_type();
      in.type = t;
      in.operands.push_back(parse_value());
      expect(",");
      in.operands.push_back(parse_value());
      in.operand_types = {t, t};
      break;
    }
    case Opcode::ICmp: {
      if (peek().kind != Tok::Ident || !parse_cmp(peek().text))
        fail("unknown comparison" + found());
      in.pred = *parse_cmp(next().text);
      TypePtr t = parse_type();
      in.type = make_int(1);
      in.operands.push_back(parse_value());
      expect(",");
      in.operands.push_back(parse_value());
      in.operand_types = {t, t};
      break;
    }
    case Opcode::ZExt:
    case Opcode::Trunc:
      in.operand_types.push_back(parse_type());
      in.operands.push_back(parse_value());
      expect_ident("to");
      in.type = parse_type();
      break;
    case Opcode::Phi: {
      TypePtr t = parse_type();
      in.type = t;
      do {
        if (is_punct(","))
          next();
        expect("[");
        in.operands.push_back(parse_value());
        in.operand_types.push_back(t);
        expect(",");
        in.incoming.push_back(expect_local());
        expect("]");
      } while (is_punct(","));
      break;
    }
    case Opcode::Alloca:
      in.elem_type = parse_type();
      in.type = make_pointer(in.elem_type);
      if (is_punct(",")) {
        next();
        in.operand_types.push_back(parse_type());
        in.operands.push_back(parse_value());
      }
      break;
    case Opcode::Load:
      in.type = parse_type();
      expect(",");
      in.operand_types.push_back(parse_type());
      in.operands.push_back(parse_value());
      break;
    case Opcode::GetElementPtr: {
      in.elem_type = parse_type();
      expect(",");
      in.operand_types.push_back(parse_type());
      in.operands.push_back(parse_value());
      while (is_punct(",")) {
        next();
        in.operand_types.push_back(parse_type());
        in.operands.push_back(parse_value());
      }
      if (in.operands.size() < 2)
        throw Error("parse", "getelementptr needs at least one index", in.loc);
      std::vector<Value> idx(in.operands.begin() + 1, in.operands.end());
      try {
        in.type = make_pointer(gep_result_pointee(in.elem_type, idx));
      } catch (const Error& e) {
        throw Error("parse", "type mismatch: " + e.detail(), in.loc);
      }
      break;
    }
    case Opcode::Call:
      parse_call_tail(in);
      if (in.type->kind == Type::Kind::Void)
        throw Error("parse", "void call cannot have a result", in.loc);
      break;
    default:
      throw Error("parse", "unknown opcode", in.loc);
    }
  }

  void check_names() {
    std::set<std::string> names;
    for (const auto& f : m_.functions)
      if (!names.insert(f.name).second)
        throw Error("parse", "duplicate function @" + f.name, f.loc);
    for (const auto& d : m_.declarations)
      if (!names.insert(d.name).second)
        throw Error("parse", "duplicate function @" + d.name);
  }
};

// Type checking over a parsed module. Registers without a definition are left
// to validate_ssa.
class TypeChecker {
public:
  explicit TypeChecker(const Module& m) : m_(m) {}

  void check() {
    for (const auto& f : m_.functions)
      check_function(f);
  }

private:
  const Module& m_;
  std::map<std::string, TypePtr> regs_;

  [[noreturn]] static void mismatch(const Instruction& in, const std::string& msg) {
    throw Error("parse", "type mismatch: " + msg, in.loc);
  }

  void expect_operand(const Instruction& in, std::size_t i, const TypePtr& want) {
    if (!same_shape(in.operand_types[i], want))
      mismatch(in, "operand " + std::to_string(i + 1) + " of " + opcode_name(in.op) +
                       " has type " + to_string(in.operand_types[i]) + ", expected " +
                       to_string(want));
  }

  void check_function(const Function& f) {
    regs_.clear();
    for (const auto& p : f.params) {
      if (p.type->kind == Type::Kind::Void || p.type->kind == Type::Kind::Label)
        throw Error("parse", "parameter %" + p.name + " has type " + to_string(p.type), f.loc);
      regs_.emplace(p.name, p.type);
    }
    for (const auto& b : f.blocks) {
      for (const auto& p : b.params)
        regs_.emplace(p.name, p.type);
      for (const auto& in : b.instructions)
        if (in.result)
          regs_.emplace(*in.result, in.type);
    }
    for (const auto& b : f.blocks)
      for (const auto& in : b.instructions)
        check_instruction(f, in);
  }

  void check_uses(const std::vector<Value>& vals, const std::vector<TypePtr>& types,
                  const Instruction& in) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (!vals[i].is_register()) {
        if (!types[i]->is_integer())
          mismatch(in, "integer constant used as " + to_string(types[i]));
        continue;
      }
      auto it = regs_.find(vals[i].name);
      if (it != regs_.end() && !same_shape(it->second, types[i]))
        mismatch(in, "%" + vals[i].name + " has type " + to_string(it->second) +
                         " but is used as " + to_string(types[i]));
    }
  }

  void check_instruction(const Function& f, const Instruction& in) {
    check_uses(in.operands, in.operand_types, in);
    for (const auto& t : in.targets)
      check_uses(t.args, t.arg_types, in);
    switch (in.op) {
    case Opcode::Add:
    case Opcode::Sub:
    case Opcode::Mul:
    case Opcode::ICmp:
      if (!in.operand_types[0]->is_integer())
        mismatch(in, opcode_name(in.op) + " on non-integer type " +
                         to_string(in.operand_types[0]));
      break;
    case Opcode::ZExt:
    case Opcode::Trunc: {
      const auto& src = in.operand_types[0];
      if (!src->is_integer() || !in.type->is_integer())
        mismatch(in, opcode_name(in.op) + " needs integer types");
      bool ok = in.op == Opcode::ZExt ? src->width < in.type->width
                                      : src->width > in.type->width;
      if (!ok)
        mismatch(in, opcode_name(in.op) + " from " + to_string(src) + " to " +
                         to_string(in.type));
      break;
    }
    case Opcode::Phi:
      break;
    case Opcode::Alloca:
      if (!in.operands.empty() && !in.operand_types[0]->is_integer())
        mismatch(in, "alloca count must be an integer");
      break;
    case Opcode::Load: {
      const auto& p = in.operand_types[0];
      if (!p->is_pointer() || !same_shape(p->element, in.type))
        mismatch(in, "load of " + to_string(in.type) + " through " + to_string(p));
      break;
    }
    case Opcode::Store: {
      const auto& p = in.operand_types[1];
      if (!p->is_pointer() || !same_shape(p->element, in.operand_types[0]))
        mismatch(in, "store of " + to_string(in.operand_types[0]) + " through " +
                         to_string(p));
      break;
    }
    case Opcode::GetElementPtr: {
      const auto& p = in.operand_types[0];
      if (!p->is_pointer() || !same_shape(p->element, in.elem_type))
        mismatch(in, "getelementptr base " + to_string(p) + " does not point to " +
                         to_string(in.elem_type));
      for (std::size_t i = 1; i < in.operand_types.size(); ++i)
        if (!in.operand_types[i]->is_integer())
          mismatch(in, "getelementptr index must be an integer");
      break;
    }
    case Opcode::Call: {
      std::vector<TypePtr> params;
      TypePtr ret;
      if (const auto* g = m_.find_function(in.callee)) {
        for (const auto& p : g->params)
          params.push_back(p.type);
        ret = g->ret_type;
      } else if (const auto* d = m_.find_declaration(in.callee)) {
        params = d->param_types;
        ret = d->ret_type;
      } else {
        throw Error("parse", "call to undefined function @" + in.callee, in.loc);
      }
      if (params.size() != in.operands.size())
        mismatch(in, "@" + in.callee + " expects " + std::to_string(params.size()) +
                         " arguments");
      for (std::size_t i = 0; i < params.size(); ++i)
        expect_operand(in, i, params[i]);
      if (!same_shape(ret, in.type))
        mismatch(in, "@" + in.callee + " returns " + to_string(ret));
      break;
    }
    case Opcode::Br:
      break;
    case Opcode::BrCond:
      expect_operand(in, 0, make_int(1));
      break;
    case Opcode::Ret:
      if (in.operands.empty()) {
        if (f.ret_type->kind != Type::Kind::Void)
          mismatch(in, "ret void in function returning " + to_string(f.ret_type));
      } else {
        expect_operand(in, 0, f.ret_type);
      }
      break;
    }
  }
};

std::string print_params(const std::vector<Param>& params) {
  std::string out = "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i)
      out += ", ";
    out += to_string(params[i].type) + " %" + params[i].name;
  }
  return out + ")";
}

std::string print_target(const BranchTarget& t) {
  std::string out = "label %" + t.label;
  if (!t.args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i)
        out += ", ";
      out += to_string(t.arg_types[i]) + " " + to_string(t.args[i]);
    }
    out += ")";
  }
  return out;
}

std::string typed(const Instruction& in, std::size_t i) {
  return to_string(in.operand_types[i]) + " " + to_string(in.operands[i]);
}

} // namespace

Module parse_module(std::string_view text) {
  Module m;
  Parser p(text, m);
  p.parse_module();
  TypeChecker(m).check();
  return m;
}

TypePtr parse_type(std::string_view text, const Module* context) {
  Module scratch;
  if (context)
    scratch.named_types = context->named_types;
  Parser p(text, scratch);
  TypePtr t = p.parse_type();
  if (!p.at_end())
    throw Error("parse", "trailing text after type", p.peek().loc);
  return t;
}

std::string print_instruction(const Instruction& in) {
  std::string out;
  if (in.result)
    out = "%" + *in.result + " = ";
  switch (in.op) {
  case Opcode::Add:
  case Opcode::Sub:
  case Opcode::Mul:
    out += opcode_name(in.op) + " " + to_string(in.type) + " " +
           to_string(in.operands[0]) + ", " + to_string(in.operands[1]);
    break;
  case Opcode::ICmp:
    out += "icmp " + cmp_name(in.pred) + " " + to_string(in.operand_types[0]) + " " +
           to_string(in.operands[0]) + ", " + to_string(in.operands[1]);
    break;
  case Opcode::ZExt:
  case Opcode::Trunc:
    out += opcode_name(in.op) + " " + typed(in, 0) + " to " + to_string(in.type);
    break;
  case Opcode::Phi:
    out += "phi " + to_string(in.type);
    for (std::size_t i = 0; i < in.operands.size(); ++i)
      out += std::string(i ? ", " : " ") + "[ " + to_string(in.operands[i]) + ", %" +
             in.incoming[i] + " ]";
    break;
  case Opcode::Alloca:
    out += "alloca " + to_string(in.elem_type);
    if (!in.operands.empty())
      out += ", " + typed(in, 0);
    break;
  case Opcode::Load:
    out += "load " + to_string(in.type) + ", " + typed(in, 0);
    break;
  case Opcode::Store:
    out += "store " + typed(in, 0) + ", " + typed(in, 1);
    break;
  case Opcode::GetElementPtr:
    out += "getelementptr " + to_string(in.elem_type);
    for (std::size_t i = 0; i < in.operands.size(); ++i)
      out += ", " + typed(in, i);
    break;
  case Opcode::Call:
    out += "call " + to_string(in.type) + " @" + in.callee + "(";
    for (std::size_t i = 0; i < in.operands.size(); ++i)
      out += (i ? ", " : "") + typed(in, i);
    out += ")";
    break;
  case Opcode::Br:
    out += "br " + print_target(in.targets[0]);
    break;
  case Opcode::BrCond:
    out += "br " + typed(in, 0) + ", " + print_target(in.targets[0]) + ", " +
           print_target(in.targets[1]);
    break;
  case Opcode::Ret:
    out += in.operands.empty() ? "ret void" : "ret " + typed(in, 0);
    break;
  }
  return out;
}

std::string print_function(const Function& f) {
  std::ostringstream os;
  os << "define " << to_string(f.ret_type) << " @" << f.name << print_params(f.params)
     << " {\n";
  for (const auto& b : f.blocks) {
    os << b.label;
    if (!b.params.empty())
      os << print_params(b.params);
    os << ":\n";
    for (const auto& in : b.instructions)
      os << "  " << print_instruction(in) << "\n";
  }
  os << "}\n";
  return os.str();
}

std::string print_module(const Module& m) {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first)
      os << "\n";
    first = false;
  };
  for (const auto& [name, t] : m.named_types) {
    sep();
    os << "%" << name << " = type " << to_string(*make_struct(t->fields)) << "\n";
  }
  for (const auto& d : m.declarations) {
    sep();
    os << "declare " << to_string(d.ret_type) << " @" << d.name << "(";
    for (std::size_t i = 0; i < d.param_types.size(); ++i)
      os << (i ? ", " : "") << to_string(d.param_types[i]);
    os << ")\n";
  }
  for (const auto& f : m.functions) {
    sep();
    os << print_function(f);
  }
  return os.str();
}

} // namespace irenergy::ir
