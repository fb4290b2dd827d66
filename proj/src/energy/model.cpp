#include "irenergy/energy/model.hpp"

#include "irenergy/hcir/text.hpp"
#include "irenergy/ir/ir.hpp"
#include "irenergy/support/error.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace irenergy::energy {

using hcir::HCProgram;
using hcir::Literal;
using hcir::RegularType;
using hcir::SizeExpr;
using hcir::SizeRelation;
using hcir::TrustAssertion;

std::optional<Rational> EnergyModel::opcode_cost(const std::string& key) const {
  if (auto it = opcode_costs.find(key); it != opcode_costs.end())
    return it->second;
  std::string family;
  if (key.rfind("icmp_", 0) == 0)
    family = "icmp";
  else if (key == "br_cond")
    family = "br";
  if (auto it = opcode_costs.find(family); !family.empty() && it != opcode_costs.end())
    return it->second;
  return std::nullopt;
}

const TrustAssertion* EnergyModel::find_assertion(const std::string& pred,
                                                  std::size_t arity) const {
  for (const auto& a : assertions)
    if (a.pred == pred && a.arity == arity)
      return &a;
  return nullptr;
}

namespace {

const std::set<std::string>& cost_keys() {
  static const std::set<std::string> keys = [] {
    std::set<std::string> k;
    for (int op = 0; op <= static_cast<int>(ir::Opcode::Ret); ++op)
      k.insert(ir::cost_key(static_cast<ir::Opcode>(op)));
    for (auto p : {ir::CmpPred::Eq, ir::CmpPred::Ne, ir::CmpPred::Slt, ir::CmpPred::Sle,
                   ir::CmpPred::Sgt, ir::CmpPred::Sge})
      k.insert(ir::cost_key(ir::Opcode::ICmp, p));
    k.insert("icmp");
    return k;
  }();
  return keys;
}

class ModelReader {
public:
  explicit ModelReader(int line) : line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("model", "line " + std::to_string(line_) + ": " + msg, {line_, 1});
  }

  Rational cost(const std::string& text) const {
    Rational v;
    try {
      v = parse_rational(text);
    } catch (const Error&) {
      fail("malformed cost '" + text + "'");
    }
    if (v < 0)
      fail("negative cost " + text);
    return v;
  }

  std::size_t index(const std::string& text) const {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
      fail("malformed argument index '" + text + "'");
    return std::stoul(text);
  }

  SizeExpr bound(const std::string& text, std::size_t arity) const {
    SizeExpr e;
    try {
      e = hcir::parse_size_expr(text);
    } catch (const Error&) {
      fail("malformed size bound '" + text + "'");
    }
    if (e.kind == SizeExpr::Kind::ElementOf && e.arg >= arity)
      fail("size bound '" + text + "' refers to a missing argument");
    if (e.kind == SizeExpr::Kind::Affine)
      for (const auto& [v, k] : e.affine.coeffs) {
        if (v.size() < 2 || v[0] != 's' || index(v.substr(1)) >= arity)
          fail("size bound '" + text + "' uses unknown size variable " + v);
      }
    return e;
  }

private:
  int line_;
};

} // namespace

EnergyModel load_cost_model(std::string_view text) {
  EnergyModel m;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> w;
    for (std::string tok; ls >> tok;)
      w.push_back(tok);
    if (w.empty())
      continue;
    ModelReader r(line_no);
    if (w[0] == "instr") {
      if (w.size() != 3)
        r.fail("expected 'instr <opcode> <nJ>'");
      if (!cost_keys().count(w[1]))
        r.fail("unknown opcode '" + w[1] + "'");
      if (!m.opcode_costs.emplace(w[1], r.cost(w[2])).second)
        r.fail("duplicate cost for opcode " + w[1]);
    } else if (w[0] == "block") {
      if (w.size() != 3)
        r.fail("expected 'block <function>:<label> <nJ>'");
      auto colon = w[1].find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == w[1].size())
        r.fail("expected <function>:<label>, got '" + w[1] + "'");
      hcir::BlockRef ref{w[1].substr(0, colon), w[1].substr(colon + 1)};
      if (!m.block_costs.emplace(ref, r.cost(w[2])).second)
        r.fail("duplicate cost for block " + w[1]);
    } else if (w[0] == "pred") {
      if (w.size() < 4)
        r.fail("expected 'pred <name>/<arity> avg <nJ>'");
      auto slash = w[1].find('/');
      if (slash == std::string::npos || slash == 0)
        r.fail("expected <name>/<arity>, got '" + w[1] + "'");
      TrustAssertion a;
      a.pred = w[1].substr(0, slash);
      a.arity = r.index(w[1].substr(slash + 1));
      if (w[2] == "lower" || w[2] == "upper")
        r.fail("unsupported aggregation '" + w[2] + "' (only avg)");
      if (w[2] != "avg")
        r.fail("unknown aggregation '" + w[2] + "'");
      a.energy = r.cost(w[3]);
      for (std::size_t k = 4; k < w.size(); k += 4) {
        if (w[k] != "size" || k + 3 >= w.size())
          r.fail("expected 'size <arg> <lower> <upper>'");
        SizeRelation rel;
        rel.arg = r.index(w[k + 1]);
        if (rel.arg >= a.arity)
          r.fail("size relation on missing argument " + w[k + 1]);
        rel.lower = r.bound(w[k + 2], a.arity);
        rel.upper = r.bound(w[k + 3], a.arity);
        if (rel.lower.kind == SizeExpr::Kind::Infinite)
          r.fail("lower size bound cannot be inf");
        a.sizes.push_back(rel);
      }
      if (m.find_assertion(a.pred, a.arity))
        r.fail("duplicate assertion for " + w[1]);
      m.assertions.push_back(std::move(a));
    } else {
      r.fail("unknown entry '" + w[0] + "'");
    }
  }
  return m;
}

EnergyModel load_cost_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error("model", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_cost_model(ss.str());
}

namespace {

const TrustAssertion* assertion_for(const EnergyModel& m, const HCProgram& p,
                                    const std::string& pred, std::size_t arity) {
  if (const auto* a = p.find_assertion(pred, arity))
    return a;
  return m.find_assertion(pred, arity);
}

Rational key_cost(const EnergyModel& m, const std::string& key, const std::string& where) {
  auto c = m.opcode_cost(key);
  if (!c)
    throw Error("model", "no cost for opcode " + key + (where.empty() ? "" : " in " + where));
  return *c;
}

} // namespace

Rational literal_cost(const EnergyModel& m, const HCProgram& p, const Literal& l,
                      const std::string& where) {
  if (l.kind == Literal::Kind::Builtin) {
    const auto* info = hcir::builtin_info(l.name);
    if (info && info->abstract)
      if (const auto* a = assertion_for(m, p, l.name, l.args.size()); a && a->energy)
        return *a->energy;
  }
  Rational total = 0;
  for (const auto& key : l.origins) {
    if (key == ir::cost_key(ir::Opcode::Call))
      continue;
    total += key_cost(m, key, where);
  }
  return total;
}

CostMap aggregate_block_costs(const EnergyModel& m, const HCProgram& p) {
  CostMap out;
  out.reserve(p.clauses.size());
  for (const auto& c : p.clauses) {
    if (!c.origin) {
      out.push_back(0);
      continue;
    }
    if (auto it = m.block_costs.find(*c.origin); it != m.block_costs.end()) {
      out.push_back(it->second);
      continue;
    }
    std::string where = "block " + c.origin->to_string();
    Rational total = 0;
    for (const auto& l : c.body)
      total += literal_cost(m, p, l, where);
    for (const auto& key : c.absorbed)
      total += key_cost(m, key, where);
    out.push_back(total);
  }
  return out;
}

std::map<hcir::BlockRef, Rational> block_cost_map(const HCProgram& p, const CostMap& c) {
  std::map<hcir::BlockRef, Rational> out;
  for (std::size_t i = 0; i < p.clauses.size(); ++i)
    if (p.clauses[i].origin)
      out[*p.clauses[i].origin] = c.at(i);
  return out;
}

namespace {

// The list type shared by every list-typed signature position, if unique.
std::optional<RegularType> common_list_type(const HCProgram& p) {
  std::optional<RegularType> found;
  for (const auto& [name, sig] : p.preds)
    for (const auto& t : sig.types)
      if (t.kind == RegularType::Kind::List) {
        if (found && !(*found == t))
          return std::nullopt;
        found = t;
      }
  return found;
}

SizeExpr size_var(std::size_t arg) {
  SizeExpr e;
  e.affine = Affine::var("s" + std::to_string(arg));
  return e;
}

SizeExpr element_of(std::size_t arg) {
  SizeExpr e;
  e.kind = SizeExpr::Kind::ElementOf;
  e.arg = arg;
  return e;
}

void complete_builtin(TrustAssertion& a, const std::optional<RegularType>& list) {
  std::optional<RegularType> elem;
  if (list)
    elem = list->args[0];
  const auto num = RegularType::num();
  if (a.pred == "nth") {
    a.pre = {num, list, std::nullopt};
    a.post = {num, list, elem};
    if (a.sizes.empty())
      a.sizes.push_back({2, element_of(1), element_of(1)});
  } else if (a.pred == "set_nth") {
    a.pre = {num, list, elem, std::nullopt};
    a.post = {num, list, elem, list};
    if (a.sizes.empty())
      a.sizes.push_back({3, size_var(1), size_var(1)});
  } else if (a.pred == "mk_list") {
    a.pre = {num, std::nullopt};
    a.post = {num, list};
    if (a.sizes.empty())
      a.sizes.push_back({1, size_var(0), size_var(0)});
  }
}

} // namespace

void emit_trust_assertions(const EnergyModel& m, HCProgram& p) {
  auto list = common_list_type(p);
  static const std::vector<std::pair<std::string, std::size_t>> abstract = {
      {"nth", 3}, {"set_nth", 4}, {"mk_list", 2}};
  for (const auto& a : m.assertions) {
    bool builtin = false;
    for (const auto& [name, arity] : abstract)
      if (a.pred == name) {
        if (a.arity != arity)
          throw Error("model", "assertion " + a.pred + "/" + std::to_string(a.arity) +
                                   " has the wrong arity (expected " + std::to_string(arity) +
                                   ")");
        builtin = true;
      }
    if (builtin)
      continue;
    const auto* sig = p.find_pred(a.pred);
    if (!sig)
      throw Error("model", "assertion for unknown predicate " + a.pred + "/" +
                               std::to_string(a.arity));
    if (sig->arity != a.arity)
      throw Error("model", "assertion " + a.pred + "/" + std::to_string(a.arity) +
                               " does not match arity " + std::to_string(sig->arity));
    if (sig->kind != hcir::PredKind::External)
      throw Error("model", "assertion for " + a.pred + " which has clauses");
  }
  for (const auto& [name, arity] : abstract) {
    if (p.find_assertion(name, arity))
      continue;
    const auto* given = m.find_assertion(name, arity);
    if (!given)
      continue;
    TrustAssertion a = *given;
    a.pred = name;
    a.arity = arity;
    complete_builtin(a, list);
    p.assertions.push_back(std::move(a));
  }
  for (const auto& given : m.assertions) {
    const auto* sig = p.find_pred(given.pred);
    if (!sig || hcir::builtin_info(given.pred) || p.find_assertion(given.pred, given.arity))
      continue;
    TrustAssertion a = given;
    a.pre.assign(a.arity, std::nullopt);
    a.post.assign(a.arity, std::nullopt);
    for (std::size_t i = 0; i < sig->types.size(); ++i) {
      if (i < sig->inputs)
        a.pre[i] = sig->types[i];
      a.post[i] = sig->types[i];
    }
    p.assertions.push_back(std::move(a));
  }
}

} // namespace irenergy::energy
