#include "irenergy/support/affine.hpp"

#include "irenergy/support/error.hpp"

namespace irenergy {

Affine Affine::of(Rational c) {
  Affine a;
  a.constant = std::move(c);
  return a;
}

Affine Affine::var(const std::string& name, Rational coeff) {
  Affine a;
  if (coeff != 0)
    a.coeffs[name] = std::move(coeff);
  return a;
}

Rational Affine::coeff(const std::string& v) const {
  auto it = coeffs.find(v);
  return it == coeffs.end() ? Rational(0) : it->second;
}

Affine Affine::operator+(const Affine& o) const {
  Affine r = *this;
  r.constant += o.constant;
  for (const auto& [v, c] : o.coeffs) {
    Rational s = r.coeff(v) + c;
    if (s == 0)
      r.coeffs.erase(v);
    else
      r.coeffs[v] = s;
  }
  return r;
}

Affine Affine::operator-(const Affine& o) const { return *this + (-o); }

Affine Affine::operator*(const Rational& k) const {
  if (k == 0)
    return Affine::of(0);
  Affine r;
  r.constant = constant * k;
  for (const auto& [v, c] : coeffs)
    r.coeffs[v] = c * k;
  return r;
}

Affine Affine::subst(const std::map<std::string, Affine>& env) const {
  Affine r = Affine::of(constant);
  for (const auto& [v, c] : coeffs) {
    auto it = env.find(v);
    r = r + (it == env.end() ? Affine::var(v, c) : it->second * c);
  }
  return r;
}

Rational Affine::eval(const std::map<std::string, Rational>& env) const {
  Rational r = constant;
  for (const auto& [v, c] : coeffs) {
    auto it = env.find(v);
    if (it == env.end())
      throw Error("arithmetic", "unbound variable " + v);
    r += c * it->second;
  }
  return r;
}

std::string Affine::to_string() const {
  std::string out;
  auto append = [&](const Rational& c, const std::string& body) {
    bool neg = c < 0;
    Rational mag = neg ? Rational(-c) : c;
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
  };
  for (const auto& [v, c] : coeffs)
    append(c, v);
  if (constant != 0 || out.empty())
    append(constant, "");
  return out;
}

bool Affine::operator==(const Affine& o) const {
  return constant == o.constant && coeffs == o.coeffs;
}

bool Affine::operator<(const Affine& o) const {
  if (coeffs != o.coeffs)
    return coeffs < o.coeffs;
  return constant < o.constant;
}

} // namespace irenergy
