#include "irenergy/recsolve/closed_form.hpp"

#include "irenergy/support/error.hpp"

#include <algorithm>
#include <cctype>
#include <climits>

namespace irenergy::recsolve {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error("closed-form", msg); }

long to_long_exponent(const Rational& r, const char* what) {
  if (!is_integer(r))
    fail(std::string(what) + " must be an integer, got " + format_exact(r));
  const Integer& n = r.get_num();
  if (!n.fits_slong_p())
    fail(std::string(what) + " out of range");
  return n.get_si();
}

std::string base_text(const Rational& b) {
  std::string s = format_exact(b);
  if (b < 0 || !has_finite_decimal(b))
    return "(" + s + ")";
  return s;
}

// Ordering of exponential factor maps: Fib, Lucas, then bases descending.
bool exps_before(const std::map<std::string, ExpFactor>& a,
                 const std::map<std::string, ExpFactor>& b) {
  auto ia = a.begin(), ib = b.begin();
  for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
    if (ia->first != ib->first)
      return ia->first < ib->first;
    if (!(ia->second == ib->second))
      return ia->second < ib->second;
  }
  return ia == a.end() ? false : ib == b.end() ? true : false;
}

bool powers_before(const std::map<std::string, unsigned>& a,
                   const std::map<std::string, unsigned>& b) {
  auto ia = a.begin(), ib = b.begin();
  for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
    if (ia->first != ib->first)
      return ia->first < ib->first;
    if (ia->second != ib->second)
      return ia->second > ib->second;
  }
  return ia != a.end() && ib == b.end();
}

// Strict weak order on term keys; equivalence coincides with same_key().
bool key_before(const Term& a, const Term& b) {
  if (a.call.has_value() != b.call.has_value())
    return !a.call.has_value();
  if (a.exps.empty() != b.exps.empty())
    return !a.exps.empty();
  if (!(a.exps == b.exps))
    return exps_before(a.exps, b.exps);
  if (a.degree() != b.degree())
    return a.degree() > b.degree();
  if (a.powers != b.powers)
    return powers_before(a.powers, b.powers);
  if (a.call && b.call)
    return *a.call < *b.call;
  return false;
}

Term mul_terms(const Term& a, const Term& b) {
  Term r;
  r.coeff = a.coeff * b.coeff;
  r.powers = a.powers;
  for (const auto& [v, k] : b.powers)
    r.powers[v] += k;
  r.exps = a.exps;
  for (const auto& [v, e] : b.exps) {
    auto it = r.exps.find(v);
    if (it == r.exps.end()) {
      r.exps[v] = e;
      continue;
    }
    if (it->second.kind != ExpFactor::Kind::Base || e.kind != ExpFactor::Kind::Base)
      fail("product of fib/lucas factors in " + v + " is not representable");
    it->second.base *= e.base;
    if (it->second.base == 1)
      r.exps.erase(it);
  }
  if (a.call && b.call)
    fail("product of two opaque calls");
  r.call = a.call ? a.call : b.call;
  return r;
}

// exp factor `e` applied to an affine argument.
ClosedForm exp_of_affine(const ExpFactor& e, const Affine& a) {
  if (a.is_constant()) {
    long d = to_long_exponent(a.constant, "exponent");
    switch (e.kind) {
    case ExpFactor::Kind::Base:
      return ClosedForm(pow(e.base, d));
    case ExpFactor::Kind::Fib:
      return ClosedForm(Rational(fib_number(d)));
    case ExpFactor::Kind::Lucas:
      return ClosedForm(Rational(lucas_number(d)));
    }
  }
  if (a.coeffs.size() != 1)
    fail("exponent " + a.to_string() + " mixes several variables");
  const auto& [w, c] = *a.coeffs.begin();
  long d = to_long_exponent(a.constant, "exponent offset");
  switch (e.kind) {
  case ExpFactor::Kind::Base: {
    long k = to_long_exponent(c, "exponent coefficient");
    return ClosedForm(pow(e.base, d)) * ClosedForm::power_of(pow(e.base, k), w);
  }
  case ExpFactor::Kind::Fib:
  case ExpFactor::Kind::Lucas: {
    if (c != 1)
      fail("fib/lucas argument " + a.to_string() + " must have unit coefficient");
    Rational fd(fib_number(d)), ld(lucas_number(d));
    Rational half(1, 2);
    if (e.kind == ExpFactor::Kind::Fib)
      return ClosedForm::fib(w) * ClosedForm(ld * half) +
             ClosedForm::lucas(w) * ClosedForm(fd * half);
    return ClosedForm::lucas(w) * ClosedForm(ld * half) +
           ClosedForm::fib(w) * ClosedForm(5 * fd * half);
  }
  }
  fail("bad exponential factor");
}

} // namespace

bool ExpFactor::operator==(const ExpFactor& o) const {
  return kind == o.kind && (kind != Kind::Base || base == o.base);
}

bool ExpFactor::operator<(const ExpFactor& o) const {
  if (kind != o.kind)
    return kind < o.kind;
  return kind == Kind::Base && base > o.base;
}

bool OpaqueCall::operator==(const OpaqueCall& o) const {
  return pred == o.pred && args == o.args;
}

bool OpaqueCall::operator<(const OpaqueCall& o) const {
  if (pred != o.pred)
    return pred < o.pred;
  return args < o.args;
}

std::string OpaqueCall::to_string() const {
  std::string out = pred + "(";
  for (std::size_t i = 0; i < args.size(); ++i)
    out += (i ? ", " : "") + args[i].to_string();
  return out + ")";
}

bool Term::same_key(const Term& o) const {
  return powers == o.powers && exps == o.exps && call == o.call;
}

unsigned Term::degree() const {
  unsigned d = 0;
  for (const auto& [v, k] : powers)
    d += k;
  return d;
}

ClosedForm::ClosedForm(Rational c) {
  if (c != 0) {
    Term t;
    t.coeff = std::move(c);
    terms_.push_back(std::move(t));
  }
}

ClosedForm ClosedForm::var(const std::string& name) {
  Term t;
  t.coeff = 1;
  t.powers[name] = 1;
  return raw({t});
}

ClosedForm ClosedForm::from_affine(const Affine& a) {
  ClosedForm r(a.constant);
  for (const auto& [v, c] : a.coeffs)
    r += var(v) * ClosedForm(c);
  return r;
}

ClosedForm ClosedForm::power_of(Rational base, const std::string& v) {
  if (base == 0)
    fail("exponential base 0");
  if (base == 1)
    return ClosedForm(1);
  Term t;
  t.coeff = 1;
  t.exps[v] = {ExpFactor::Kind::Base, std::move(base)};
  return raw({t});
}

ClosedForm ClosedForm::fib(const std::string& v) {
  Term t;
  t.coeff = 1;
  t.exps[v] = {ExpFactor::Kind::Fib, 1};
  return raw({t});
}

ClosedForm ClosedForm::lucas(const std::string& v) {
  Term t;
  t.coeff = 1;
  t.exps[v] = {ExpFactor::Kind::Lucas, 1};
  return raw({t});
}

ClosedForm ClosedForm::opaque(OpaqueCall call) {
  Term t;
  t.coeff = 1;
  t.call = std::move(call);
  return raw({t});
}

ClosedForm ClosedForm::from_terms(std::vector<Term> terms) {
  ClosedForm r;
  r.terms_ = std::move(terms);
  r.normalize();
  return r;
}

ClosedForm ClosedForm::raw(std::vector<Term> terms) {
  ClosedForm r;
  r.terms_ = std::move(terms);
  return r;
}

void ClosedForm::normalize() {
  for (auto& t : terms_) {
    for (auto it = t.powers.begin(); it != t.powers.end();)
      it = it->second == 0 ? t.powers.erase(it) : std::next(it);
    for (auto it = t.exps.begin(); it != t.exps.end();) {
      if (it->second.kind == ExpFactor::Kind::Base && it->second.base == 0)
        fail("exponential base 0");
      it = it->second.kind == ExpFactor::Kind::Base && it->second.base == 1
               ? t.exps.erase(it)
               : std::next(it);
    }
  }
  std::stable_sort(terms_.begin(), terms_.end(), key_before);
  std::vector<Term> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().same_key(t))
      merged.back().coeff += t.coeff;
    else
      merged.push_back(std::move(t));
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Term& t) { return t.coeff == 0; }),
               merged.end());
  terms_ = std::move(merged);
}

bool ClosedForm::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 && terms_[0].powers.empty() && terms_[0].exps.empty() &&
          !terms_[0].call);
}

std::optional<Rational> ClosedForm::constant_value() const {
  if (!is_constant())
    return std::nullopt;
  return terms_.empty() ? Rational(0) : terms_[0].coeff;
}

std::optional<Affine> ClosedForm::as_affine() const {
  Affine a;
  for (const auto& t : terms_) {
    if (!t.exps.empty() || t.call || t.degree() > 1)
      return std::nullopt;
    if (t.powers.empty())
      a.constant += t.coeff;
    else
      a = a + Affine::var(t.powers.begin()->first, t.coeff);
  }
  return a;
}

std::set<std::string> ClosedForm::variables() const {
  std::set<std::string> out;
  for (const auto& t : terms_) {
    for (const auto& [v, k] : t.powers)
      out.insert(v);
    for (const auto& [v, e] : t.exps)
      out.insert(v);
    if (t.call)
      for (const auto& a : t.call->args)
        for (const auto& [v, c] : a.coeffs)
          out.insert(v);
  }
  return out;
}

bool ClosedForm::mentions(const std::string& v) const { return variables().count(v) > 0; }

bool ClosedForm::has_opaque() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.call.has_value(); });
}

std::vector<OpaqueCall> ClosedForm::opaque_calls() const {
  std::vector<OpaqueCall> out;
  for (const auto& t : terms_)
    if (t.call && std::find(out.begin(), out.end(), *t.call) == out.end())
      out.push_back(*t.call);
  return out;
}

ClosedForm ClosedForm::operator+(const ClosedForm& o) const {
  std::vector<Term> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return from_terms(std::move(all));
}

ClosedForm ClosedForm::operator-() const {
  ClosedForm r = *this;
  for (auto& t : r.terms_)
    t.coeff = -t.coeff;
  return r;
}

ClosedForm ClosedForm::operator-(const ClosedForm& o) const { return *this + (-o); }

ClosedForm ClosedForm::operator*(const ClosedForm& o) const {
  std::vector<Term> all;
  all.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : o.terms_)
      all.push_back(mul_terms(a, b));
  return from_terms(std::move(all));
}

ClosedForm ClosedForm::subst(const std::map<std::string, Affine>& env) const {
  ClosedForm out;
  for (const auto& t : terms_) {
    ClosedForm r(t.coeff);
    for (const auto& [v, k] : t.powers) {
      auto it = env.find(v);
      ClosedForm base = it == env.end() ? var(v) : from_affine(it->second);
      for (unsigned i = 0; i < k; ++i)
        r = r * base;
    }
    for (const auto& [v, e] : t.exps) {
      auto it = env.find(v);
      r = r * exp_of_affine(e, it == env.end() ? Affine::var(v) : it->second);
    }
    if (t.call) {
      OpaqueCall c = *t.call;
      for (auto& a : c.args)
        a = a.subst(env);
      r = r * opaque(std::move(c));
    }
    out += r;
  }
  return out;
}

Rational ClosedForm::evaluate(const std::map<std::string, Rational>& env) const {
  auto lookup = [&](const std::string& v) -> const Rational& {
    auto it = env.find(v);
    if (it == env.end())
      fail("unbound variable " + v);
    return it->second;
  };
  Rational sum = 0;
  for (const auto& t : terms_) {
    if (t.call)
      fail("cannot evaluate unresolved call " + t.call->to_string());
    Rational v = t.coeff;
    for (const auto& [name, k] : t.powers)
      v *= pow(lookup(name), static_cast<long>(k));
    for (const auto& [name, e] : t.exps) {
      long n = to_long_exponent(lookup(name), "exponent");
      switch (e.kind) {
      case ExpFactor::Kind::Base:
        v *= pow(e.base, n);
        break;
      case ExpFactor::Kind::Fib:
        v *= Rational(fib_number(n));
        break;
      case ExpFactor::Kind::Lucas:
        v *= Rational(lucas_number(n));
        break;
      }
    }
    sum += v;
  }
  return sum;
}

std::string ClosedForm::to_string() const {
  if (terms_.empty())
    return "0";
  std::string out;
  for (const auto& t : terms_) {
    std::vector<std::string> factors;
    for (const auto& [v, k] : t.powers)
      factors.push_back(k == 1 ? v : v + "^" + std::to_string(k));
    for (const auto& [v, e] : t.exps) {
      switch (e.kind) {
      case ExpFactor::Kind::Base:
        factors.push_back(base_text(e.base) + "^" + v);
        break;
      case ExpFactor::Kind::Fib:
        factors.push_back("fib(" + v + ")");
        break;
      case ExpFactor::Kind::Lucas:
        factors.push_back("lucas(" + v + ")");
        break;
      }
    }
    if (t.call)
      factors.push_back(t.call->to_string());
    std::string body;
    for (std::size_t i = 0; i < factors.size(); ++i)
      body += (i ? "*" : "") + factors[i];

    bool neg = t.coeff < 0;
    Rational mag = neg ? Rational(-t.coeff) : t.coeff;
    std::string text;
    if (body.empty())
      text = format_exact(mag);
    else if (mag == 1)
      text = body;
    else if (has_finite_decimal(mag))
      text = format_exact(mag) + "*" + body;
    else
      text = "(" + format_exact(mag) + ")*" + body;
    if (out.empty())
      out = (neg ? "-" : "") + text;
    else
      out += (neg ? " - " : " + ") + text;
  }
  return out;
}

bool ClosedForm::operator==(const ClosedForm& o) const {
  if (terms_.size() != o.terms_.size())
    return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (!terms_[i].same_key(o.terms_[i]) || terms_[i].coeff != o.terms_[i].coeff)
      return false;
  return true;
}

bool ClosedForm::operator<(const ClosedForm& o) const {
  std::size_t n = std::min(terms_.size(), o.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (key_before(terms_[i], o.terms_[i]))
      return true;
    if (key_before(o.terms_[i], terms_[i]))
      return false;
    if (terms_[i].coeff != o.terms_[i].coeff)
      return terms_[i].coeff < o.terms_[i].coeff;
  }
  return terms_.size() < o.terms_.size();
}

ClosedForm canonicalize(const ClosedForm& cf) { return ClosedForm::from_terms(cf.terms()); }

Integer fib_number(long n) {
  Integer r;
  unsigned long m = static_cast<unsigned long>(n < 0 ? -n : n);
  mpz_fib_ui(r.get_mpz_t(), m);
  if (n < 0 && m % 2 == 0)
    r = -r;
  return r;
}

Integer lucas_number(long n) {
  Integer r;
  unsigned long m = static_cast<unsigned long>(n < 0 ? -n : n);
  mpz_lucnum_ui(r.get_mpz_t(), m);
  if (n < 0 && m % 2 == 1)
    r = -r;
  return r;
}

namespace {

class FormParser {
public:
  explicit FormParser(std::string_view s) : s_(s) {}

  ClosedForm parse() {
    ClosedForm r = expr();
    skip();
    if (i_ != s_.size())
      error("unexpected '" + std::string(1, s_[i_]) + "'");
    return r;
  }

private:
  std::string_view s_;
  std::size_t i_ = 0;

  [[noreturn]] void error(const std::string& msg) const {
    throw Error("closed-form",
                msg + " at column " + std::to_string(i_ + 1) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
      ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  ClosedForm expr() {
    ClosedForm r;
    if (eat('-'))
      r = -term();
    else {
      eat('+');
      r = term();
    }
    while (true) {
      if (eat('+'))
        r += term();
      else if (eat('-'))
        r -= term();
      else
        return r;
    }
  }

  ClosedForm term() {
    ClosedForm r = unary();
    while (true) {
      if (eat('*')) {
        r = r * unary();
      } else if (eat('/')) {
        auto d = unary().constant_value();
        if (!d || *d == 0)
          error("division by a non-constant or zero");
        r = r * ClosedForm(1 / *d);
      } else {
        return r;
      }
    }
  }

  ClosedForm unary() {
    if (eat('-'))
      return -unary();
    return power();
  }

  ClosedForm power() {
    ClosedForm base = primary();
    if (!eat('^'))
      return base;
    ClosedForm exponent = unary();
    if (auto k = exponent.constant_value()) {
      if (!is_integer(*k))
        error("non-integer exponent");
      long n = to_long_exponent(*k, "exponent");
      if (n < 0) {
        auto b = base.constant_value();
        if (!b || *b == 0)
          error("negative exponent on a non-constant");
        return ClosedForm(irenergy::pow(*b, n));
      }
      ClosedForm r(1);
      for (long j = 0; j < n; ++j)
        r = r * base;
      return r;
    }
    auto b = base.constant_value();
    if (!b)
      error("symbolic exponent needs a constant base");
    auto a = exponent.as_affine();
    if (!a)
      error("exponent must be affine");
    if (*b == 0)
      error("exponential base 0");
    return exp_of_affine({ExpFactor::Kind::Base, *b}, *a);
  }

  ClosedForm primary() {
    skip();
    if (i_ >= s_.size())
      error("unexpected end of input");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      ClosedForm r = expr();
      if (!eat(')'))
        error("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i_;
      while (j < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[j])) || s_[j] == '.'))
        ++j;
      if (j < s_.size() && (s_[j] == 'e' || s_[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s_.size() && (s_[k] == '+' || s_[k] == '-'))
          ++k;
        if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
          j = k;
          while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j])))
            ++j;
        }
      }
      Rational v;
      try {
        v = parse_rational(s_.substr(i_, j - i_));
      } catch (const Error&) {
        error("malformed number");
      }
      i_ = j;
      return ClosedForm(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
        ++j;
      std::string name(s_.substr(i_, j - i_));
      i_ = j;
      if (!eat('('))
        return ClosedForm::var(name);
      std::vector<Affine> args;
      if (!eat(')')) {
        do {
          auto a = expr().as_affine();
          if (!a)
            error("argument of " + name + " must be affine");
          args.push_back(*a);
        } while (eat(','));
        if (!eat(')'))
          error("expected ')'");
      }
      if (name == "fib" || name == "lucas") {
        if (args.size() != 1)
          error(name + " takes one argument");
        auto kind = name == "fib" ? ExpFactor::Kind::Fib : ExpFactor::Kind::Lucas;
        return exp_of_affine({kind, 1}, args[0]);
      }
      return ClosedForm::opaque({name, std::move(args)});
    }
    error("unexpected '" + std::string(1, c) + "'");
  }
};

} // namespace

ClosedForm parse_closed_form(std::string_view text) { return FormParser(text).parse(); }

} // namespace irenergy::recsolve
