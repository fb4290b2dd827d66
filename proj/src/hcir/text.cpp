#include "irenergy/hcir/text.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace irenergy::hcir {

namespace {

std::string join_terms(const std::vector<Term>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i)
    out += (i ? ", " : "") + to_string(args[i]);
  return out;
}

std::string print_head(const Clause& c) {
  std::string out = c.pred;
  if (!c.head.empty()) {
    out += "(";
    for (std::size_t i = 0; i < c.head.size(); ++i)
      out += (i ? ", " : "") + c.head[i];
    out += ")";
  }
  return out;
}

std::string type_or_var(const std::optional<RegularType>& t) {
  return t ? to_string(*t) : "var";
}

} // namespace

std::string print_literal(const Literal& l) {
  switch (l.kind) {
  case Literal::Kind::Guard:
    return to_string(l.args[0]) + "=" + to_string(l.args[1]);
  case Literal::Kind::Compare:
    return to_string(l.args[0]) + " " + compare_symbol(l.op) + " " + to_string(l.args[1]);
  case Literal::Kind::Builtin:
  case Literal::Kind::Call:
    if (l.args.empty())
      return l.name;
    return l.name + "(" + join_terms(l.args) + ")";
  }
  return "?";
}

std::string print_clause(const Clause& c) {
  std::string out = print_head(c);
  if (c.body.empty())
    return out + ".\n";
  if (c.kind == ClauseKind::Test && c.body.size() == 1)
    return out + " :- " + print_literal(c.body[0]) + ".\n";
  out += " :-\n";
  for (std::size_t i = 0; i < c.body.size(); ++i)
    out += "  " + print_literal(c.body[i]) + (i + 1 == c.body.size() ? ".\n" : ",\n");
  return out;
}

std::string print_assertion(const TrustAssertion& a) {
  std::string out = ":- trust pred " + a.pred + "/" + std::to_string(a.arity);
  auto types = [](const std::vector<std::optional<RegularType>>& ts) {
    std::string s = "(";
    for (std::size_t i = 0; i < ts.size(); ++i)
      s += (i ? ", " : "") + type_or_var(ts[i]);
    return s + ")";
  };
  if (!a.pre.empty())
    out += " : " + types(a.pre);
  if (!a.post.empty())
    out += " => " + types(a.post);
  for (const auto& s : a.sizes)
    out += " size(" + std::to_string(s.arg) + ", " + s.lower.to_string() + ", " +
           s.upper.to_string() + ")";
  if (a.energy)
    out += " + resource(avg, energy, " + format_exact(*a.energy) + ")";
  return out + ".\n";
}

std::string print_hcir(const HCProgram& p, const PrintOptions& opts) {
  if (p.clauses.empty() && p.preds.empty() && p.assertions.empty())
    return "";
  std::ostringstream os;
  if (opts.directives) {
    os << ":- resource energy.\n";
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const auto& c : p.clauses)
      if (p.preds.count(c.pred) && seen.insert(c.pred).second)
        order.push_back(c.pred);
    for (const auto& [name, sig] : p.preds)
      if (seen.insert(name).second)
        order.push_back(name);
    for (const auto& name : order) {
      const PredSig& sig = p.preds.at(name);
      os << ":- pred " << name;
      if (sig.arity) {
        os << "(";
        for (std::size_t i = 0; i < sig.arity; ++i)
          os << (i ? ", " : "") << (i < sig.inputs ? "+" : "-")
             << (i < sig.types.size() ? to_string(sig.types[i]) : "num");
        os << ")";
      }
      os << ".\n";
    }
    for (const auto& a : p.assertions)
      os << print_assertion(a);
    os << "\n";
  }
  for (const auto& c : p.clauses) {
    if (opts.origins && c.origin)
      os << "% origin " << c.origin->to_string() << "\n";
    os << print_clause(c);
  }
  return os.str();
}

namespace {

struct Tok {
  enum Kind { Ident, Number, Punct, End } kind;
  std::string text;
  Location loc;
};

std::vector<Tok> lex_hc(std::string_view src) {
  std::vector<Tok> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto prev_is_value = [&]() {
    if (out.empty())
      return false;
    const Tok& t = out.back();
    return t.kind == Tok::Ident || t.kind == Tok::Number || t.text == ")";
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '%') {
      while (i < src.size() && src[i] != '\n')
        adv(1);
      continue;
    }
    Location loc{line, col};
    bool negative = c == '-' && i + 1 < src.size() &&
                    std::isdigit(static_cast<unsigned char>(src[i + 1])) && !prev_is_value();
    if (std::isdigit(static_cast<unsigned char>(c)) || negative) {
      std::size_t j = i + 1;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
          ++j;
      }
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), loc});
      adv(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), loc});
      adv(j - i);
      continue;
    }
    static const std::vector<std::string> puncts = {":-", "\\=", "=<", ">=", "=>", "(", ")",
                                                    ",",  ".",   "=",  "<",  ">",  "+", "-",
                                                    "/",  ":",   "*"};
    bool matched = false;
    for (const auto& p : puncts)
      if (src.substr(i, p.size()) == p) {
        out.push_back({Tok::Punct, p, loc});
        adv(p.size());
        matched = true;
        break;
      }
    if (!matched)
      throw Error("hcir-parse", std::string("unexpected character '") + c + "'", loc);
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

class HcParser {
public:
  explicit HcParser(std::string_view text) : toks_(lex_hc(text)) {}

  HCProgram run() {
    while (peek().kind != Tok::End) {
      if (peek().text == ":-")
        directive();
      else
        clause();
    }
    for (const auto& c : prog_.clauses)
      if (!prog_.preds.count(c.pred)) {
        PredSig sig;
        sig.name = c.pred;
        sig.arity = sig.inputs = c.head.size();
        sig.types.assign(sig.arity, RegularType::num());
        prog_.preds[c.pred] = sig;
      }
    infer_kinds();
    return std::move(prog_);
  }

  SizeExpr lone_size_expr() {
    SizeExpr e = size_expr();
    if (peek().kind != Tok::End)
      fail("unexpected text after size expression");
    return e;
  }

private:
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  HCProgram prog_;

  const Tok& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Tok take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("hcir-parse", msg + " near '" + peek().text + "'", peek().loc);
  }
  void expect(const std::string& p) {
    if (peek().text != p)
      fail("expected '" + p + "'");
    take();
  }
  bool accept(const std::string& p) {
    if (peek().text == p && peek().kind != Tok::End) {
      take();
      return true;
    }
    return false;
  }
  std::string ident() {
    if (peek().kind != Tok::Ident)
      fail("expected identifier");
    return take().text;
  }
  std::size_t index() {
    if (peek().kind != Tok::Number)
      fail("expected number");
    return std::stoul(take().text);
  }

  RegularType regtype() {
    std::string name = ident();
    if (name == "num")
      return RegularType::num();
    if (name == "atm")
      return RegularType::atm();
    std::vector<RegularType> args;
    if (accept("(")) {
      do
        args.push_back(regtype());
      while (accept(","));
      expect(")");
    }
    if (name == "list") {
      if (args.size() != 1)
        fail("list takes one argument");
      return RegularType::list(args[0]);
    }
    return RegularType::functor(name, std::move(args));
  }

  std::vector<std::optional<RegularType>> type_tuple() {
    std::vector<std::optional<RegularType>> out;
    expect("(");
    do {
      if (peek().text == "var") {
        take();
        out.push_back(std::nullopt);
      } else {
        out.push_back(regtype());
      }
    } while (accept(","));
    expect(")");
    return out;
  }

  Rational number_value() {
    bool neg = accept("-");
    if (peek().kind != Tok::Number)
      fail("expected number");
    Rational r = parse_rational(take().text);
    if (accept("/")) {
      if (peek().kind != Tok::Number)
        fail("expected denominator");
      r /= parse_rational(take().text);
    }
    return neg ? Rational(-r) : r;
  }

  // Affine size expression over s0, s1, ...
  SizeExpr size_expr() {
    SizeExpr e;
    if (peek().text == "inf") {
      take();
      e.kind = SizeExpr::Kind::Infinite;
      return e;
    }
    if (peek().text == "elem") {
      take();
      expect("(");
      e.kind = SizeExpr::Kind::ElementOf;
      e.arg = index();
      expect(")");
      return e;
    }
    bool first = true;
    while (true) {
      Rational sign = 1;
      if (accept("-"))
        sign = -1;
      else if (!first && !accept("+"))
        break;
      first = false;
      Rational coeff = 1;
      bool has_coeff = false;
      if (accept("(")) {
        coeff = number_value();
        expect(")");
        has_coeff = true;
      } else if (peek().kind == Tok::Number) {
        coeff = number_value();
        has_coeff = true;
      }
      if (has_coeff && !accept("*")) {
        e.affine = e.affine + Affine::of(sign * coeff);
        continue;
      }
      e.affine = e.affine + Affine::var(ident(), sign * coeff);
    }
    return e;
  }

  void directive() {
    expect(":-");
    std::string what = ident();
    if (what == "resource") {
      ident();
    } else if (what == "pred") {
      PredSig sig;
      sig.name = ident();
      if (accept("(")) {
        do {
          bool input = true;
          if (accept("-"))
            input = false;
          else
            expect("+");
          if (input && sig.inputs != sig.arity)
            fail("input after output");
          sig.types.push_back(regtype());
          ++sig.arity;
          if (input)
            ++sig.inputs;
        } while (accept(","));
        expect(")");
      }
      prog_.preds[sig.name] = sig;
    } else if (what == "trust") {
      if (ident() != "pred")
        fail("expected 'pred'");
      TrustAssertion a;
      a.pred = ident();
      expect("/");
      a.arity = index();
      if (accept(":"))
        a.pre = type_tuple();
      if (accept("=>"))
        a.post = type_tuple();
      while (peek().text == "size") {
        take();
        expect("(");
        SizeRelation r;
        r.arg = index();
        expect(",");
        r.lower = size_expr();
        expect(",");
        r.upper = size_expr();
        expect(")");
        a.sizes.push_back(r);
      }
      if (accept("+")) {
        if (ident() != "resource")
          fail("expected resource");
        expect("(");
        if (ident() != "avg")
          fail("only avg resources are supported");
        expect(",");
        if (ident() != "energy")
          fail("expected energy");
        expect(",");
        a.energy = number_value();
        expect(")");
      }
      prog_.assertions.push_back(a);
    } else {
      fail("unknown directive");
    }
    expect(".");
  }

  Term term() {
    if (peek().kind == Tok::Number) {
      Tok t = take();
      if (t.text.find('.') != std::string::npos)
        fail("integer expected");
      return Term::c(std::stoll(t.text));
    }
    return Term::v(ident());
  }

  std::vector<Term> term_list() {
    std::vector<Term> out;
    if (accept("(")) {
      do
        out.push_back(term());
      while (accept(","));
      expect(")");
    }
    return out;
  }

  Literal literal() {
    static const std::map<std::string, CompareOp> ops = {
        {"=", CompareOp::Eq}, {"\\=", CompareOp::Ne}, {"<", CompareOp::Lt},
        {"=<", CompareOp::Le}, {">", CompareOp::Gt},  {">=", CompareOp::Ge}};
    bool call_shape = peek().kind == Tok::Ident && !ops.count(peek(1).text);
    if (call_shape) {
      std::string name = take().text;
      auto args = term_list();
      return builtin_info(name) ? Literal::builtin(name, args) : Literal::call(name, args);
    }
    Term a = term();
    auto it = ops.find(peek().text);
    if (it == ops.end())
      fail("expected comparison");
    take();
    Term b = term();
    if (it->second == CompareOp::Eq && a.is_var && !b.is_var)
      return Literal::guard(a.var, b.value);
    return Literal::test(it->second, a, b);
  }

  void clause() {
    Clause c;
    c.pred = ident();
    for (const auto& t : term_list())
      c.head.push_back(to_string(t));
    if (accept(":-")) {
      do
        c.body.push_back(literal());
      while (accept(","));
    }
    expect(".");
    prog_.clauses.push_back(std::move(c));
  }

  void infer_kinds() {
    std::map<std::string, ClauseKind> kinds;
    for (const auto& c : prog_.clauses) {
      ClauseKind k = ClauseKind::Block;
      if (c.body.size() == 1 && c.body[0].kind == Literal::Kind::Compare)
        k = ClauseKind::Test;
      else if (!c.body.empty() && c.body[0].kind == Literal::Kind::Guard)
        k = ClauseKind::Dispatch;
      auto [it, fresh] = kinds.insert({c.pred, k});
      if (!fresh && it->second != k)
        it->second = ClauseKind::Block;
    }
    for (auto& c : prog_.clauses)
      c.kind = kinds[c.pred];
    for (auto& [name, sig] : prog_.preds) {
      auto it = kinds.find(name);
      if (it == kinds.end())
        sig.kind = PredKind::External;
      else
        sig.kind = it->second == ClauseKind::Test       ? PredKind::Test
                   : it->second == ClauseKind::Dispatch ? PredKind::Dispatch
                                                        : PredKind::Block;
    }
  }
};

} // namespace

HCProgram parse_hcir(std::string_view text) { return HcParser(text).run(); }

SizeExpr parse_size_expr(std::string_view text) { return HcParser(text).lone_size_expr(); }

} // namespace irenergy::hcir
