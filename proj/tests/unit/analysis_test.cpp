#include "irenergy/analysis/analysis.hpp"
#include "irenergy/energy/model.hpp"
#include "irenergy/hcir/translate.hpp"
#include "irenergy/interp/run.hpp"
#include "irenergy/ir/parse.hpp"
#include "irenergy/support/error.hpp"

#include "support/inputs.hpp"
#include "support/program_gen.hpp"

#include <gtest/gtest.h>

namespace irenergy::analysis {
namespace {

using recsolve::ClosedForm;
using testing::Rng;

const std::vector<std::string> kCorpus = {"traverse", "fact",   "fib",    "sqr", "pow2",
                                          "reverse",  "concat", "matmult", "fir", "biquad"};

struct Setup {
  ir::Module module;
  hcir::HCProgram program;
  energy::CostMap costs;
  interp::BlockCosts blocks;
};

Setup prepare_text(const std::string& text, const std::string& model) {
  Setup s{ir::parse_module(text), {}, {}, {}};
  s.program = hcir::translate_module(s.module);
  auto em = energy::load_cost_model_file(testing::source_path(model));
  energy::emit_trust_assertions(em, s.program);
  s.costs = energy::aggregate_block_costs(em, s.program);
  s.blocks = energy::block_cost_map(s.program, s.costs);
  return s;
}

Setup prepare(const std::string& name, const std::string& model = "models/constant.model") {
  return prepare_text(testing::read_source("corpus/" + name + ".sir"), model);
}

Setup traverse_unit() { return prepare("traverse", "models/unit_traverse.model"); }

Rational interp_cost(const Setup& s, const std::string& fn, const std::map<std::string, long>& sizes,
                     std::uint64_t seed = 1) {
  Rng rng(seed);
  const auto* f = s.module.find_function(fn);
  interp::RunOptions opts;
  opts.step_limit = 100'000'000;
  return interp::run_ir(s.module, fn, testing::sized_inputs(rng, s.module, *f, sizes), s.blocks,
                        {}, opts)
      .cost;
}

const std::string kStraightLine = R"(
define i32 @h(i32 %a) {
entry:
  %b = add i32 %a, 1
  ret i32 %b
}
define i32 @g(i32 %N) {
entry:
  %c = icmp sgt i32 %N, 3
  br i1 %c, label %big, label %small
big:
  %x = call i32 @h(i32 %N)
  br label %done
small:
  br label %done
done:
  %r = phi i32 [ %x, %big ], [ 0, %small ]
  ret i32 %r
}
)";

// ---------------------------------------------------------------- call graph

TEST(CallGraph, ArrayTraversalScc) {
  auto s = traverse_unit();
  CallGraph g = build_call_graph(s.program);
  ASSERT_TRUE(g.scc_of.count("looptest"));
  const auto& scc = g.sccs[g.scc_of.at("looptest")];
  EXPECT_EQ(scc, (std::vector<std::string>{"loopbody_loopend", "looptest"}));
  EXPECT_EQ(g.sccs[g.scc_of.at("alloca")], std::vector<std::string>{"alloca"});
  EXPECT_TRUE(g.recursive("looptest"));
  EXPECT_TRUE(g.recursive("loopbody_loopend"));
  EXPECT_FALSE(g.recursive("alloca"));
  // Callees come first.
  EXPECT_LT(g.scc_of.at("looptest"), g.scc_of.at("alloca"));
}

TEST(CallGraph, EdgesMatchClauseBodies) {
  for (const auto& name : kCorpus) {
    auto s = prepare(name);
    CallGraph g = build_call_graph(s.program);
    std::multiset<std::pair<std::string, std::string>> expected, got;
    for (const auto& c : s.program.clauses)
      for (const auto& l : c.body)
        if (l.kind == hcir::Literal::Kind::Call)
          expected.insert({c.pred, l.name});
    for (const auto& e : g.edges) {
      got.insert({e.caller, e.callee});
      EXPECT_EQ(s.program.clauses[e.clause].body[e.literal].name, e.callee);
    }
    EXPECT_EQ(got, expected) << name;
  }
}

TEST(CallGraph, StraightLineProgramHasSingletonSccs) {
  auto s = prepare_text(kStraightLine, "models/constant.model");
  CallGraph g = build_call_graph(s.program);
  for (const auto& scc : g.sccs) {
    EXPECT_EQ(scc.size(), 1u);
    EXPECT_FALSE(g.recursive(scc[0]));
  }
}

TEST(CallGraph, SccsMatchTransitiveClosure) {
  Rng rng(401);
  std::vector<hcir::HCProgram> programs;
  for (const auto& name : kCorpus)
    programs.push_back(prepare(name).program);
  for (int i = 0; i < 40; ++i) {
    auto gp = testing::random_program(rng, "r" + std::to_string(i));
    programs.push_back(hcir::translate_module(ir::parse_module(gp.text)));
  }
  for (const auto& p : programs) {
    CallGraph g = build_call_graph(p);
    std::size_t n = g.nodes.size();
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      idx[g.nodes[i]] = i;
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (const auto& e : g.edges)
      reach[idx[e.caller]][idx[e.callee]] = true;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (reach[i][k] && reach[k][j])
            reach[i][j] = true;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        bool same = i == j || (reach[i][j] && reach[j][i]);
        EXPECT_EQ(g.scc_of.at(g.nodes[i]) == g.scc_of.at(g.nodes[j]), same);
        // Reverse topological order of components.
        if (reach[i][j] && !same)
          EXPECT_GT(g.scc_of.at(g.nodes[i]), g.scc_of.at(g.nodes[j]));
      }
      EXPECT_EQ(g.recursive(g.nodes[i]), static_cast<bool>(reach[i][i]));
    }
  }
}

hcir::HCProgram caller_of(const std::string& callee) {
  hcir::HCProgram p;
  hcir::Clause c;
  c.pred = "p";
  c.head = {"X"};
  c.body = {hcir::Literal::call(callee, {hcir::Term::v("X")})};
  p.clauses.push_back(c);
  p.preds["p"] = {"p", 1, 1, {hcir::RegularType::num()}, hcir::PredKind::Block, "f"};
  return p;
}

TEST(CallGraph, UnknownPredicateIsAnError) {
  auto p = caller_of("mystery");
  try {
    build_call_graph(p);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.stage(), "analysis");
    EXPECT_NE(std::string(e.what()).find("mystery/1"), std::string::npos);
  }
  hcir::TrustAssertion a;
  a.pred = "mystery";
  a.arity = 1;
  a.energy = Rational(3);
  p.assertions.push_back(a);
  CallGraph g = build_call_graph(p);
  EXPECT_EQ(g.callees("p"), std::set<std::string>{"mystery"});
}

// ------------------------------------------------------------ size relations

const CallSizes* find_call(const std::vector<CallSizes>& rel, const hcir::HCProgram& p,
                           const std::string& caller, const std::string& callee) {
  for (const auto& r : rel)
    if (p.clauses[r.clause].pred == caller && r.callee == callee)
      return &r;
  return nullptr;
}

TEST(SizeRelations, LoopBodyDecrementsCounter) {
  auto s = traverse_unit();
  auto rel = infer_size_relations(s.program);
  const auto* r = find_call(rel, s.program, "loopbody_loopend", "looptest");
  ASSERT_NE(r, nullptr);
  ASSERT_EQ(r->args.size(), 2u);
  EXPECT_EQ(r->args[0], Affine::var("I") - Affine::of(1));
  EXPECT_EQ(r->args[1], Affine::var("Arr"));
}

TEST(SizeRelations, PassThroughIsIdentity) {
  auto s = traverse_unit();
  auto rel = infer_size_relations(s.program);
  const auto* r = find_call(rel, s.program, "alloca", "looptest");
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->args[0], Affine::var("N"));
  EXPECT_EQ(r->args[1], Affine::var("Arr"));
}

TEST(SizeRelations, ComparisonOutcomeIsNotAffine) {
  auto s = traverse_unit();
  auto rel = infer_size_relations(s.program);
  const auto* r = find_call(rel, s.program, "looptest", "loopbody_loopend");
  ASSERT_NE(r, nullptr);
  EXPECT_FALSE(r->args[0]);
  EXPECT_EQ(r->args[1], Affine::var("I"));
}

// Random add/sub/mul chains ending in a call; the relation must reproduce the
// concrete value at the call for random head values.
TEST(SizeRelations, ArithmeticChainsMatchConcreteValues) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    hcir::HCProgram p;
    p.preds["p"] = {"p", 2, 2, {hcir::RegularType::num(), hcir::RegularType::num()},
                    hcir::PredKind::Block, "f"};
    p.preds["q"] = {"q", 2, 2, {hcir::RegularType::num(), hcir::RegularType::num()},
                    hcir::PredKind::External, ""};
    hcir::Clause c;
    c.pred = "p";
    c.head = {"X", "Y"};
    std::vector<std::string> vars = {"X", "Y"};
    struct Op {
      std::string name;
      std::string a;
      std::optional<long> ka;
      std::string b;
      std::optional<long> kb;
      std::string out;
    };
    std::vector<Op> ops;
    std::set<std::string> non_affine;
    long n = rng.int_in(1, 8);
    for (long i = 0; i < n; ++i) {
      Op op;
      op.name = std::vector<std::string>{"add", "sub", "mul"}[rng.int_in(0, 2)];
      op.a = rng.pick(vars);
      if (rng.coin(0.5))
        op.kb = rng.int_in(-4, 4);
      else
        op.b = rng.pick(vars);
      op.out = "V" + std::to_string(i);
      auto term = [](const std::string& v, std::optional<long> k) {
        return k ? hcir::Term::c(*k) : hcir::Term::v(v);
      };
      c.body.push_back(
          hcir::Literal::builtin(op.name, {term(op.a, op.ka), term(op.b, op.kb), hcir::Term::v(op.out)}));
      bool affine = !non_affine.count(op.a) && (op.kb || !non_affine.count(op.b));
      if (op.name == "mul" && !op.kb)
        affine = false;
      if (!affine)
        non_affine.insert(op.out);
      vars.push_back(op.out);
      ops.push_back(op);
    }
    std::string a0 = rng.pick(vars), a1 = rng.pick(vars);
    c.body.push_back(hcir::Literal::call("q", {hcir::Term::v(a0), hcir::Term::v(a1)}));
    p.clauses.push_back(c);

    auto rel = infer_size_relations(p);
    ASSERT_EQ(rel.size(), 1u);
    const auto& args = rel[0].args;
    // Products of two variables may still fold (X - X is constant), so only
    // the affine fragment must be recovered.
    if (!non_affine.count(a0))
      EXPECT_TRUE(args[0]);
    if (!non_affine.count(a1))
      EXPECT_TRUE(args[1]);
    for (int sample = 0; sample < 5; ++sample) {
      std::map<std::string, long> val{{"X", rng.int_in(-20, 20)}, {"Y", rng.int_in(-20, 20)}};
      for (const auto& op : ops) {
        long a = val.at(op.a);
        long b = op.kb ? *op.kb : val.at(op.b);
        val[op.out] = op.name == "add" ? a + b : op.name == "sub" ? a - b : a * b;
      }
      std::map<std::string, Rational> env{{"X", Rational(val["X"])}, {"Y", Rational(val["Y"])}};
      if (args[0])
        EXPECT_EQ(args[0]->eval(env), Rational(val[a0]));
      if (args[1])
        EXPECT_EQ(args[1]->eval(env), Rational(val[a1]));
    }
  }
}

// ----------------------------------------------------------------- equations

TEST(Equations, ArrayTraversalUnitSystem) {
  auto s = traverse_unit();
  Analysis a = analyze(s.program, s.costs);
  const auto* h = a.header("looptest");
  ASSERT_NE(h, nullptr);
  ASSERT_TRUE(h->recurrence);
  const auto& r = *h->recurrence;
  EXPECT_EQ(r.var, "I");
  ASSERT_EQ(r.terms.size(), 1u);
  EXPECT_EQ(r.terms[0].coeff, 1);
  EXPECT_EQ(r.terms[0].shift, 1);
  EXPECT_EQ(r.q, ClosedForm(2));
  EXPECT_EQ(r.start, 1);
  ASSERT_EQ(r.initial.size(), 1u);
  EXPECT_EQ(r.initial[0], ClosedForm(2));

  std::string dump = dump_recurrences(a);
  EXPECT_NE(dump.find("alloca(N, _) = 1 + looptest(N, _)"), std::string::npos) << dump;
  EXPECT_NE(dump.find("looptest(I) = 2 + looptest(I - 1)  for I >= 1"), std::string::npos);
  EXPECT_NE(dump.find("looptest(0) = 2"), std::string::npos);
  EXPECT_NE(dump.find("traverse(N) = 2*N + 3"), std::string::npos);
}

TEST(Equations, NonRecursivePredicateHasNoRecursiveTerm) {
  auto s = prepare_text(kStraightLine, "models/constant.model");
  Analysis a = analyze(s.program, s.costs);
  EXPECT_TRUE(a.headers.empty());
  for (const auto& [name, eq] : a.system.preds)
    for (const auto& g : eq.equations)
      for (const auto& c : g.cost.pending())
        EXPECT_NE(c.pred, name);
  // g's cost is piecewise in N, h's is constant.
  const auto* h = a.function("h");
  ASSERT_TRUE(h && h->cost);
  EXPECT_EQ(*h->cost, ClosedForm(interp_cost(s, "h", {{"a", 5}})));
  const auto* g = a.function("g");
  ASSERT_TRUE(g);
  EXPECT_FALSE(g->cost);
  EXPECT_NE(g->reason.find("piecewise"), std::string::npos);
  EquationEvaluator ev(a.system);
  for (long n = -2; n <= 8; ++n)
    EXPECT_EQ(ev.cost(g->entry, {{"N", Rational(n)}}), interp_cost(s, "g", {{"N", n}})) << n;
}

TEST(Equations, FibonacciRelationHoldsInInterpreter) {
  auto s = prepare("fib");
  Analysis a = analyze(s.program, s.costs);
  const auto* h = a.header(a.function("fib")->entry);
  ASSERT_TRUE(h && h->recurrence);
  const auto& r = *h->recurrence;
  ASSERT_EQ(r.terms.size(), 2u);
  std::set<Rational> shifts;
  for (const auto& t : r.terms) {
    EXPECT_EQ(t.coeff, 1);
    shifts.insert(t.shift);
  }
  EXPECT_EQ(shifts, (std::set<Rational>{1, 2}));
  EXPECT_EQ(r.start, 2);
  auto q = r.q.constant_value();
  ASSERT_TRUE(q);
  std::vector<Rational> cost;
  for (long n = 0; n <= 20; ++n)
    cost.push_back(interp_cost(s, "fib", {{"N", n}}));
  EXPECT_EQ(ClosedForm(cost[0]), r.initial[0]);
  EXPECT_EQ(ClosedForm(cost[1]), r.initial[1]);
  for (std::size_t n = 2; n <= 20; ++n)
    EXPECT_EQ(cost[n], cost[n - 1] + cost[n - 2] + *q) << n;
}

std::vector<hcir::HCProgram> guard_programs() {
  std::vector<hcir::HCProgram> out;
  for (const auto& name : kCorpus)
    out.push_back(prepare(name).program);
  Rng rng(13);
  for (int i = 0; i < 30; ++i)
    out.push_back(hcir::translate_module(
        ir::parse_module(testing::random_program(rng, "g" + std::to_string(i)).text)));
  return out;
}

TEST(Equations, GuardsAreExclusiveAndExhaustive) {
  Rng rng(5);
  for (const auto& p : guard_programs()) {
    energy::CostMap costs(p.clauses.size(), Rational(1));
    EquationSystem sys = extract_recurrences(p, costs);
    for (const auto& [name, eq] : sys.preds) {
      std::set<std::string> symbols;
      for (const auto& g : eq.equations)
        for (const auto& c : g.guard)
          for (const auto& [v, k] : c.atom.d.coeffs)
            symbols.insert(v);
      std::vector<std::string> vars(symbols.begin(), symbols.end());
      auto check = [&](const std::map<std::string, Rational>& env) {
        int holding = 0;
        for (const auto& g : eq.equations)
          holding += std::all_of(g.guard.begin(), g.guard.end(),
                                 [&](const Condition& c) { return c.eval(env); });
        EXPECT_EQ(holding, 1) << name;
      };
      if (vars.size() == 1) {
        for (long v = -5; v <= 100; ++v)
          check({{vars[0], Rational(v)}});
      } else {
        for (int sample = 0; sample < 300; ++sample) {
          std::map<std::string, Rational> env;
          for (const auto& v : vars)
            env[v] = rng.int_in(-5, 100);
          check(env);
        }
      }
    }
  }
}

TEST(Equations, UnknownSizeIsReportedNotDropped) {
  const std::string loaded_bound = R"(
define void @scan([0 x i32]* %A) {
entry:
  %p = getelementptr [0 x i32], [0 x i32]* %A, i32 0
  %n = load i32, i32* %p
  br label %loop
loop:
  %i = phi i32 [ %n, %entry ], [ %i1, %body ]
  %c = icmp sgt i32 %i, 0
  br i1 %c, label %body, label %done
body:
  %i1 = sub i32 %i, 1
  br label %loop
done:
  ret void
}
)";
  auto s = prepare_text(loaded_bound, "models/constant.model");
  Analysis a = analyze(s.program, s.costs);
  const auto* f = a.function("scan");
  ASSERT_TRUE(f);
  EXPECT_FALSE(f->cost);
  EXPECT_NE(f->reason.find("unknown"), std::string::npos) << f->reason;
  EXPECT_NE(dump_recurrences(a).find("scan() = N/A"), std::string::npos);

  const std::string product_bound = R"(
define void @grid(i32 %N, i32 %M) {
entry:
  %n = mul i32 %N, %M
  br label %loop
loop:
  %i = phi i32 [ %n, %entry ], [ %i1, %body ]
  %c = icmp sgt i32 %i, 0
  br i1 %c, label %body, label %done
body:
  %i1 = sub i32 %i, 1
  br label %loop
done:
  ret void
}
)";
  auto t = prepare_text(product_bound, "models/constant.model");
  Analysis b = analyze(t.program, t.costs);
  ASSERT_TRUE(b.function("grid"));
  EXPECT_FALSE(b.function("grid")->cost);
}

// ------------------------------------------------------------------- ranking

TEST(Ranking, ArrayTraversalCounter) {
  auto s = traverse_unit();
  Analysis a = analyze(s.program, s.costs);
  const auto* h = a.header("looptest");
  ASSERT_TRUE(h && h->ranking);
  EXPECT_EQ(h->ranking->symbol, "I");
  EXPECT_EQ(h->ranking->index, 0u);
  EXPECT_EQ(h->ranking->decrements, std::set<long>{1});
}

TEST(Ranking, TiesTakeLowestIndex) {
  Affine a = Affine::var("a"), b = Affine::var("b");
  auto r = detect_ranking_argument({"a", "b"}, {"a", "b"}, {{a - Affine::of(1), b - Affine::of(2)}});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->index, 0u);
  r = detect_ranking_argument({"a", "b"}, {"b"}, {{a - Affine::of(1), b - Affine::of(2)}});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->index, 1u);
  EXPECT_EQ(r->decrements, std::set<long>{2});
  // Every self call must decrease it.
  r = detect_ranking_argument({"a", "b"}, {"a", "b"},
                              {{a - Affine::of(1), b}, {a, b - Affine::of(1)}});
  EXPECT_FALSE(r);
  EXPECT_FALSE(detect_ranking_argument({"a"}, {"a"}, {{a + Affine::of(1)}}));
  EXPECT_FALSE(detect_ranking_argument({"a"}, {"a"}, {{a * Rational(1, 2)}}));
  EXPECT_FALSE(detect_ranking_argument({"a"}, {"a"}, {}));
}

TEST(Ranking, GeneratedLoopsUseTheirCounter) {
  Rng rng(2024);
  testing::ProgramOptions opts;
  opts.diamonds = false;
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    auto gp = testing::random_program(rng, "loops" + std::to_string(i), opts);
    auto s = prepare_text(gp.text, "models/constant.model");
    Analysis a = analyze(s.program, s.costs);
    for (const auto& loop : gp.loops) {
      const auto* h = a.header(loop.header);
      ASSERT_NE(h, nullptr) << gp.text;
      ASSERT_TRUE(h->ranking) << h->failure << "\n" << gp.text;
      EXPECT_EQ(h->ranking->symbol, loop.counter) << gp.text;
      EXPECT_EQ(h->ranking->decrements, std::set<long>{1});
      ++checked;
    }
  }
  EXPECT_GE(checked, 40);
}

// ------------------------------------------------------------------- solving

TEST(Analyze, CorpusClosedFormsMatchInterpreter) {
  for (const auto& name : kCorpus) {
    auto s = prepare(name);
    Analysis a = analyze(s.program, s.costs);
    const auto* f = a.function(name);
    ASSERT_TRUE(f && f->cost) << name << ": " << (f ? f->reason : "");
    if (f->params.size() == 1) {
      for (long n = 0; n <= 20; ++n)
        EXPECT_EQ(f->cost->evaluate({{f->params[0], Rational(n)}}),
                  interp_cost(s, name, {{f->params[0], n}}))
            << name << " " << n;
    } else {
      ASSERT_EQ(f->params.size(), 2u) << name;
      for (long n = 0; n <= 8; ++n)
        for (long m = 0; m <= 8; ++m)
          EXPECT_EQ(f->cost->evaluate({{f->params[0], Rational(n)}, {f->params[1], Rational(m)}}),
                    interp_cost(s, name, {{f->params[0], n}, {f->params[1], m}}))
              << name << " " << n << " " << m;
    }
  }
}

TEST(Analyze, InliningPreservesRecurrenceValues) {
  int compared = 0;
  for (const auto& name : kCorpus) {
    auto s = prepare(name);
    Analysis a = analyze(s.program, s.costs);
    EquationEvaluator ev(a.system);
    for (const auto& h : a.headers) {
      ASSERT_TRUE(h.recurrence && h.solution) << h.failure;
      const auto& r = *h.recurrence;
      bool opaque = r.q.has_opaque();
      for (const auto& v : r.initial)
        opaque = opaque || v.has_opaque();
      if (opaque)
        continue;
      const auto& eq = a.system.preds.at(h.pred);
      for (long other = 0; other <= 3; ++other) {
        std::map<std::string, Rational> env;
        for (const auto& v : eq.relevant)
          env[v] = other;
        auto unrolled = recsolve::unroll(r, 20);
        for (long n = 0; n <= 20; ++n) {
          env[r.var] = n;
          auto expect = ev.cost(h.pred, env);
          ASSERT_TRUE(expect) << ev.failure();
          EXPECT_EQ(unrolled[static_cast<std::size_t>(n)].evaluate(env), *expect)
              << h.pred << " " << n;
          EXPECT_EQ(h.solution->form.evaluate(env), *expect) << h.pred << " " << n;
          ++compared;
        }
      }
    }
  }
  EXPECT_GT(compared, 100);
}

TEST(Analyze, ReportedFormsOfRandomProgramsAreExact) {
  Rng rng(99);
  int solved = 0;
  for (int i = 0; i < 40; ++i) {
    auto gp = testing::random_program(rng, "rp" + std::to_string(i));
    auto s = prepare_text(gp.text, "models/constant.model");
    Analysis a = analyze(s.program, s.costs);
    const auto* f = a.function(gp.name);
    ASSERT_TRUE(f);
    if (!f->cost)
      continue;
    ++solved;
    for (int k = 0; k < 6; ++k) {
      std::map<std::string, long> sizes;
      std::map<std::string, Rational> env;
      for (const auto& v : gp.size_params) {
        sizes[v] = rng.int_in(0, 6);
        env[v] = sizes[v];
      }
      EXPECT_EQ(f->cost->evaluate(env), interp_cost(s, gp.name, sizes, 7 + k)) << gp.text;
    }
  }
  EXPECT_GE(solved, 10);
}

TEST(Analyze, DumpListsEverySection) {
  auto s = prepare("concat");
  Analysis a = analyze(s.program, s.costs);
  std::string dump = dump_recurrences(a);
  auto eq = dump.find("% equations");
  auto rec = dump.find("% recurrences");
  auto fn = dump.find("% functions");
  ASSERT_NE(eq, std::string::npos);
  ASSERT_NE(rec, std::string::npos);
  ASSERT_NE(fn, std::string::npos);
  EXPECT_LT(eq, rec);
  EXPECT_LT(rec, fn);
  EXPECT_NE(dump.find("concat(N, M) = "), std::string::npos) << dump;
  EXPECT_NE(dump.find("solution: "), std::string::npos);
}

} // namespace
} // namespace irenergy::analysis
