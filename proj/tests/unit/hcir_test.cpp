#include "irenergy/hcir/params.hpp"
#include "irenergy/hcir/text.hpp"
#include "irenergy/hcir/translate.hpp"
#include "irenergy/ir/parse.hpp"
#include "irenergy/ir/validate.hpp"

#include "support/program_gen.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

namespace irenergy::hcir {
namespace {

using testing::Rng;

const std::vector<std::string> kCorpus = {"traverse", "fact",   "fib",    "sqr", "pow2",
                                          "reverse",  "concat", "matmult", "fir", "biquad"};

ir::Module corpus_module(const std::string& name) {
  return ir::parse_module(testing::read_source("corpus/" + name + ".sir"));
}

RegSet set(std::initializer_list<const char*> xs) {
  RegSet out;
  for (const char* x : xs)
    out.insert(x);
  return out;
}

TEST(GenKill, LoopTestUsesLiteralFormula) {
  ir::Module m = corpus_module("traverse");
  auto gk = gen_kill(*m.functions[0].find_block("looptest"));
  EXPECT_EQ(gk.gen, set({"N", "I1"}));
  EXPECT_EQ(gk.kill, set({"I", "Zcmp"}));
  auto body = gen_kill(*m.functions[0].find_block("loopbody"));
  EXPECT_EQ(body.gen, set({"Arr", "I"}));
  EXPECT_EQ(body.kill, set({"ElmPtr", "Elm", "I1"}));
}

TEST(GenKill, ReturnOnlyBlockIsEmpty) {
  ir::Module m = corpus_module("traverse");
  auto gk = gen_kill(*m.functions[0].find_block("loopend"));
  EXPECT_TRUE(gk.gen.empty());
  EXPECT_TRUE(gk.kill.empty());
}

// gen(r) iff some use of r has no definition of r strictly before it.
TEST(GenKill, MatchesQuantifiedDefinitionOnRandomBlocks) {
  Rng rng(21);
  for (int round = 0; round < 300; ++round) {
    ir::Block b = testing::random_straight_block(rng, static_cast<int>(rng.int_in(0, 12)));
    RegSet gen, kill;
    const auto& ins = b.instructions;
    for (std::size_t i = 0; i < ins.size(); ++i) {
      if (ins[i].result)
        kill.insert(*ins[i].result);
      for (const auto& v : ins[i].operands) {
        if (!v.is_register())
          continue;
        bool defined_before = false;
        for (std::size_t j = 0; j < i; ++j)
          defined_before |= ins[j].result == v.name;
        if (!defined_before)
          gen.insert(v.name);
      }
    }
    auto gk = gen_kill(b);
    EXPECT_EQ(gk.gen, gen);
    EXPECT_EQ(gk.kill, kill);
  }
}

TEST(Params, ArrayTraversalLoopTest) {
  auto ps = infer_block_params(corpus_module("traverse").functions[0]);
  EXPECT_EQ(ps.at("looptest").params_in, set({"Arr", "I"}));
  EXPECT_EQ(ps.at("alloca").params_in, set({"N", "Arr"}));
  EXPECT_EQ(ps.at("loopbody").params_in, set({"Arr", "I"}));
  EXPECT_TRUE(ps.at("loopend").params_in.empty());
  EXPECT_EQ(ps.at("loopbody").params_out, set({"Arr", "I1"}));
}

TEST(Params, SingleBlockEntryGetsFunctionParams) {
  ir::Module m = ir::parse_module("define i32 @f(i32 %a, i32 %b) {\nentry:\n  ret i32 %a\n}\n");
  auto ps = infer_block_params(m.functions[0]);
  EXPECT_EQ(ps.at("entry").params_in, set({"a", "b"}));
}

TEST(Params, OrderIndependentAndBounded) {
  Rng rng(4);
  for (int i = 0; i < 80; ++i) {
    testing::ProgramOptions opts;
    opts.max_depth = 3;
    auto prog = testing::random_program(rng, "p", opts);
    ir::Function f = ir::parse_module(prog.text).functions[0];
    std::vector<std::string> labels;
    for (const auto& b : f.blocks)
      labels.push_back(b.label);
    auto reversed = labels;
    std::reverse(reversed.begin(), reversed.end());
    auto shuffled = labels;
    std::shuffle(shuffled.begin(), shuffled.end(), rng.engine());

    auto base = infer_block_params(f);
    for (const auto& order : {labels, reversed, shuffled}) {
      FixpointOptions o;
      o.order = order;
      auto other = infer_block_params(f, o);
      EXPECT_TRUE(base.same_sets(other)) << prog.text;
      std::set<std::string> vars;
      for (const auto& b : f.blocks)
        for (const auto& in : b.instructions)
          if (in.result)
            vars.insert(*in.result);
      EXPECT_LE(other.iterations,
                static_cast<int>(f.blocks.size() * (vars.size() + f.params.size())) + 1);
    }
    for (const auto& [label, s] : base.blocks)
      for (const auto& g : s.gen)
        EXPECT_TRUE(s.params_in.count(g)) << label << " " << g;
  }
}

TEST(Phi, ArrayTraversalThreadsValuesThroughBranches) {
  ir::Function f = corpus_module("traverse").functions[0];
  auto ps = infer_block_params(f);
  ir::Function g = eliminate_phi(f, ps);
  const ir::Block& looptest = *g.find_block("looptest");
  ASSERT_EQ(looptest.params.size(), 1u);
  EXPECT_EQ(looptest.params[0].name, "I");
  EXPECT_NE(looptest.instructions.front().op, ir::Opcode::Phi);
  EXPECT_EQ(g.find_block("alloca")->terminator()->targets[0].args,
            std::vector<ir::Value>{ir::Value::reg("N")});
  EXPECT_EQ(g.find_block("loopbody")->terminator()->targets[0].args,
            std::vector<ir::Value>{ir::Value::reg("I1")});
  EXPECT_TRUE(ir::validate_ssa(g).ok()) << ir::validate_ssa(g).to_string();
}

TEST(Phi, NoPhiMeansUnchanged) {
  ir::Function f = corpus_module("fib").functions[0];
  EXPECT_EQ(eliminate_phi(f, infer_block_params(f)), f);
}

TEST(Phi, OperandCountMismatchIsAnError) {
  ir::Function f = corpus_module("traverse").functions[0];
  auto ps = infer_block_params(f);
  auto& phi = f.blocks[1].instructions[0];
  phi.operands.pop_back();
  phi.incoming.pop_back();
  phi.operand_types.pop_back();
  EXPECT_THROW(eliminate_phi(f, ps), Error);
}

TEST(Phi, EliminatedProgramsStayValid) {
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    auto prog = testing::random_program(rng, "p");
    ir::Function f = ir::parse_module(prog.text).functions[0];
    ir::Function g = eliminate_phi(f, infer_block_params(f));
    EXPECT_TRUE(ir::validate_ssa(g).ok()) << prog.text << ir::validate_ssa(g).to_string();
    // gen differs by design: branch args are refs, phi operands are not.
    auto before = infer_block_params(f);
    auto after = infer_block_params(g);
    for (const auto& [label, s] : before.blocks) {
      EXPECT_EQ(after.at(label).params_in, s.params_in) << prog.text;
      EXPECT_EQ(after.at(label).params_out, s.params_out) << prog.text;
    }
  }
}

TEST(TypeTranslation, StructArrayMatchesRegularTypes) {
  ir::Module m = ir::parse_module("%struct.mystruct = type { i32, [5 x i32] }\n");
  auto t = ir::parse_type("[0 x { i32, [5 x i32] }]*", &m);
  RegularType expect = RegularType::list(RegularType::functor(
      "mystruct", {RegularType::num(), RegularType::list(RegularType::num())}));
  EXPECT_EQ(translate_type(t, &m), expect);
  EXPECT_EQ(to_string(translate_type(t, &m)), "list(mystruct(num, list(num)))");
}

TEST(TypeTranslation, Primitives) {
  EXPECT_EQ(translate_type(ir::make_int(32)), RegularType::num());
  EXPECT_EQ(translate_type(ir::make_void()), RegularType::atm());
  EXPECT_EQ(translate_type(ir::make_label()), RegularType::atm());
  EXPECT_EQ(translate_type(ir::make_pointer(ir::make_int(1))), RegularType::num());
}

// Independent rewriter over the printed IR type; functor names are compared
// separately since they depend on naming order.
struct TypeTextRewriter {
  std::string s;
  std::size_t i = 0;
  void ws() {
    while (i < s.size() && s[i] == ' ')
      ++i;
  }
  std::string run() {
    std::string out = primary();
    ws();
    while (i < s.size() && s[i] == '*') {
      ++i;
      ws();
    }
    return out;
  }
  std::string primary() {
    ws();
    if (s[i] == 'i') {
      while (i < s.size() && (s[i] == 'i' || std::isdigit(static_cast<unsigned char>(s[i]))))
        ++i;
      return "num";
    }
    if (s[i] == '[') {
      i = s.find('x', i) + 1;
      std::string elem = run();
      ws();
      ++i;  // ']'
      return "list(" + elem + ")";
    }
    // '{'
    ++i;
    std::string out = "F(";
    bool first = true;
    while (true) {
      ws();
      if (s[i] == '}') {
        ++i;
        break;
      }
      if (s[i] == ',') {
        ++i;
        continue;
      }
      out += (first ? "" : ", ") + run();
      first = false;
    }
    return out + ")";
  }
};

std::string erase_names(const RegularType& t) {
  switch (t.kind) {
  case RegularType::Kind::Num:
    return "num";
  case RegularType::Kind::Atm:
    return "atm";
  case RegularType::Kind::List:
    return "list(" + erase_names(t.args[0]) + ")";
  case RegularType::Kind::Functor: {
    std::string out = "F(";
    for (std::size_t i = 0; i < t.args.size(); ++i)
      out += (i ? ", " : "") + erase_names(t.args[i]);
    return out + ")";
  }
  }
  return "?";
}

void collect_functors(const RegularType& t, std::map<std::string, std::string>& shapes,
                      bool& clash) {
  for (const auto& a : t.args)
    collect_functors(a, shapes, clash);
  if (t.kind != RegularType::Kind::Functor)
    return;
  auto [it, fresh] = shapes.insert({t.name, erase_names(t)});
  if (!fresh && it->second != erase_names(t))
    clash = true;
}

TEST(TypeTranslation, AgreesWithTextRewriterOnRandomTypes) {
  Rng rng(17);
  TypeNamer namer;
  std::map<std::string, std::string> shapes;
  for (int i = 0; i < 400; ++i) {
    auto t = testing::random_type(rng, 5);
    RegularType r = translate_type(t, namer);
    TypeTextRewriter rw{ir::to_string(t)};
    EXPECT_EQ(erase_names(r), rw.run()) << ir::to_string(t);
    bool clash = false;
    collect_functors(r, shapes, clash);
    EXPECT_FALSE(clash) << ir::to_string(t);
  }
}

TEST(InstructionTranslation, Examples) {
  ir::Module m = corpus_module("traverse");
  auto gep = translate_instruction(m.functions[0].blocks[2].instructions[0]);
  ASSERT_EQ(gep.size(), 1u);
  EXPECT_EQ(print_literal(gep[0]), "nth(I, Arr, ElmPtr)");

  ir::Instruction add;
  add.op = ir::Opcode::Add;
  add.result = "a";
  add.type = ir::make_int(32);
  add.operands = {ir::Value::reg("b"), ir::Value::imm(0)};
  add.operand_types = {add.type, add.type};
  auto lits = translate_instruction(add);
  ASSERT_EQ(lits.size(), 1u);
  EXPECT_EQ(lits[0].kind, Literal::Kind::Builtin);
  EXPECT_EQ(print_literal(lits[0]), "add(b, 0, a)");

  ir::Instruction load;
  load.op = ir::Opcode::Load;
  EXPECT_THROW(translate_instruction(load), Error);
}

TEST(FunctionTranslation, ArrayTraversalClauses) {
  HCProgram p = translate_module(corpus_module("traverse"));
  std::vector<std::string> heads;
  for (const auto& c : p.clauses)
    heads.push_back(c.pred + "/" + std::to_string(c.head.size()));
  EXPECT_EQ(heads, (std::vector<std::string>{"alloca/2", "looptest/2", "icmp_ne/3", "icmp_ne/3",
                                             "loopbody_loopend/3", "loopbody_loopend/3"}));
  EXPECT_EQ(p.preds.at("loopbody_loopend").kind, PredKind::Dispatch);
  EXPECT_EQ(p.preds.at("icmp_ne").kind, PredKind::Test);
  EXPECT_EQ(p.clauses[4].origin, (BlockRef{"traverse", "loopbody"}));
  EXPECT_EQ(p.clauses[5].origin, (BlockRef{"traverse", "loopend"}));
  EXPECT_FALSE(p.clauses[2].origin);
  EXPECT_EQ(p.clauses[1].absorbed, (std::vector<std::string>{"phi", "br_cond"}));
  ASSERT_EQ(p.functions.size(), 1u);
  EXPECT_EQ(p.functions[0].entry, "alloca");
}

TEST(FunctionTranslation, SingleReturnBlock) {
  HCProgram p = translate_module(
      ir::parse_module("define void @f(i32 %a) {\nentry:\n  %b = add i32 %a, 1\n  ret void\n}\n"));
  ASSERT_EQ(p.clauses.size(), 1u);
  for (const auto& l : p.clauses[0].body)
    EXPECT_NE(l.kind, Literal::Kind::Call);
}

TEST(FunctionTranslation, ErrorsOnUnfusedAddress) {
  auto m = ir::parse_module(R"(
define i32 @f([0 x i32]* %A) {
entry:
  %p = getelementptr [0 x i32], [0 x i32]* %A, i32 0
  %x = load i32, i32* %p
  %y = load i32, i32* %p
  ret i32 %x
}
)");
  try {
    translate_module(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.stage(), "translate");
    EXPECT_EQ(e.location().line, 4);
  }
}

TEST(FunctionTranslation, ClauseBodiesAreSingleAssignment) {
  Rng rng(9);
  std::vector<HCProgram> programs;
  for (const auto& name : kCorpus)
    programs.push_back(translate_module(corpus_module(name)));
  for (int i = 0; i < 40; ++i)
    programs.push_back(translate_module(ir::parse_module(testing::random_program(rng, "r").text)));
  for (const auto& p : programs)
    for (const auto& c : p.clauses) {
      std::set<std::string> bound(c.head.begin(), c.head.end());
      for (const auto& l : c.body) {
        if (l.is_test())
          continue;
        std::size_t inputs = l.args.size();
        if (l.kind == Literal::Kind::Builtin)
          inputs = builtin_info(l.name)->inputs;
        else if (const PredSig* sig = p.find_pred(l.name))
          inputs = sig->inputs;
        for (std::size_t k = 0; k < l.args.size(); ++k) {
          const Term& t = l.args[k];
          if (!t.is_var)
            continue;
          if (k < inputs) {
            EXPECT_TRUE(bound.count(t.var)) << print_clause(c) << " reads unbound " << t.var;
          } else if (!std::count(c.head.begin(), c.head.end(), t.var)) {
            EXPECT_TRUE(bound.insert(t.var).second) << print_clause(c) << " rebinds " << t.var;
          }
        }
      }
    }
}

TEST(Print, GoldenArrayTraversal) {
  HCProgram p = translate_module(corpus_module("traverse"));
  PrintOptions opts;
  opts.directives = false;
  EXPECT_EQ(print_hcir(p, opts), testing::read_source("tests/golden/fig4.hcir"));
  std::string full = print_hcir(p);
  EXPECT_EQ(full.rfind(":- resource energy.\n", 0), 0u);
  EXPECT_NE(full.find(":- pred looptest(+num, +list(num)).\n"), std::string::npos);
}

TEST(Print, EmptyProgram) { EXPECT_EQ(print_hcir(HCProgram{}), ""); }

TEST(Print, PrintParsePrintIsAFixpoint) {
  Rng rng(33);
  std::vector<HCProgram> programs;
  for (const auto& name : kCorpus)
    programs.push_back(translate_module(corpus_module(name)));
  for (int i = 0; i < 30; ++i)
    programs.push_back(translate_module(ir::parse_module(testing::random_program(rng, "r").text)));
  TrustAssertion a;
  a.pred = "nth";
  a.arity = 3;
  a.pre = {RegularType::num(), RegularType::list(RegularType::num()), std::nullopt};
  a.sizes.push_back({2, {SizeExpr::Kind::ElementOf, {}, 1}, {SizeExpr::Kind::ElementOf, {}, 1}});
  SizeExpr affine;
  affine.affine = Affine::var("s0", Rational(1, 3)) - Affine::of(2);
  a.sizes.push_back({1, affine, {SizeExpr::Kind::Infinite, {}, 0}});
  a.energy = parse_rational("1215439.5");
  programs[0].assertions.push_back(a);
  for (const auto& p : programs) {
    std::string once = print_hcir(p);
    HCProgram back = parse_hcir(once);
    EXPECT_EQ(print_hcir(back), once);
    EXPECT_EQ(back.clauses.size(), p.clauses.size());
    for (std::size_t i = 0; i < p.clauses.size(); ++i) {
      EXPECT_EQ(back.clauses[i].body, std::vector<Literal>(back.clauses[i].body));
      EXPECT_EQ(back.clauses[i].kind, p.clauses[i].kind) << print_clause(p.clauses[i]);
    }
    for (const auto& [name, sig] : p.preds) {
      ASSERT_TRUE(back.preds.count(name));
      EXPECT_EQ(back.preds.at(name).inputs, sig.inputs);
      EXPECT_EQ(back.preds.at(name).types, sig.types);
    }
  }
  EXPECT_EQ(parse_hcir(print_hcir(programs[0])).assertions, programs[0].assertions);
}

TEST(Print, ParseErrorsCarryLocation) {
  try {
    parse_hcir("p(X) :-\n  q(X) ?");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.stage(), "hcir-parse");
    EXPECT_EQ(e.location().line, 2);
  }
}

} // namespace
} // namespace irenergy::hcir
