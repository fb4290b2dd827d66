#include "irenergy/ir/cfg.hpp"
#include "irenergy/ir/parse.hpp"
#include "irenergy/ir/validate.hpp"

#include "support/program_gen.hpp"

#include <gtest/gtest.h>

#include <regex>
#include <sstream>

namespace irenergy::ir {
namespace {

using testing::Rng;

const std::vector<std::string> kCorpus = {"traverse", "fact",   "fib",    "sqr", "pow2",
                                          "reverse",  "concat", "matmult", "fir", "biquad"};

Module corpus_module(const std::string& name) {
  return parse_module(testing::read_source("corpus/" + name + ".sir"));
}

TEST(Parse, ArrayTraversalHasFourBlocks) {
  Module m = corpus_module("traverse");
  ASSERT_EQ(m.functions.size(), 1u);
  const Function& f = m.functions[0];
  std::vector<std::string> labels;
  for (const auto& b : f.blocks)
    labels.push_back(b.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"alloca", "looptest", "loopbody", "loopend"}));
  EXPECT_EQ(f.blocks[1].instructions[0].op, Opcode::Phi);
  EXPECT_EQ(f.blocks[1].instructions[1].loc.line, 7);
}

TEST(Parse, EmptyModule) {
  EXPECT_TRUE(parse_module("").functions.empty());
  EXPECT_TRUE(parse_module("; only a comment\n\n").functions.empty());
}

TEST(Parse, EveryCorpusProgramParsesAndValidates) {
  for (const auto& name : kCorpus) {
    SCOPED_TRACE(name);
    Module m = corpus_module(name);
    ASSERT_EQ(m.functions.size(), 1u);
    auto report = validate_ssa(m.functions[0]);
    EXPECT_TRUE(report.ok()) << report.to_string();
  }
}

TEST(Parse, Errors) {
  auto expect_error = [](const std::string& text, const std::string& fragment, int line) {
    try {
      parse_module(text);
      ADD_FAILURE() << "no error for: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.stage(), "parse");
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
      EXPECT_EQ(e.location().line, line) << e.what();
    }
  };
  expect_error("define void @f() {\nentry:\n  %x = fadd i32 1, 2\n  ret void\n}\n",
               "unknown opcode 'fadd'", 3);
  expect_error("define void @f(i32 %a) {\nentry:\n  %x = add i32 %a, \n  ret void\n}\n",
               "expected", 4);
  expect_error("define i32 @f(i1 %a) {\nentry:\n  %x = add i32 %a, 1\n  ret i32 %x\n}\n",
               "type mismatch", 3);
  expect_error("define void @f() {\nentry:\n  %x = call i32 @g()\n  ret void\n}\n", "@g", 3);
}

TEST(Parse, RoundTripCorpus) {
  for (const auto& name : kCorpus) {
    SCOPED_TRACE(name);
    Module m = corpus_module(name);
    std::string printed = print_module(m);
    Module again = parse_module(printed);
    EXPECT_EQ(again, m);
    EXPECT_EQ(print_module(again), printed);
  }
}

TEST(Parse, RoundTripRandomFiftyFunctionCorpus) {
  Rng rng(11);
  std::string text;
  for (int i = 0; i < 50; ++i) {
    testing::ProgramOptions opts;
    opts.max_depth = static_cast<int>(rng.int_in(1, 3));
    opts.returns_value = rng.coin(0.7);
    text += testing::random_program(rng, "g" + std::to_string(i), opts).text + "\n";
  }
  Module m = parse_module(text);
  ASSERT_EQ(m.functions.size(), 50u);
  std::string printed = print_module(m);
  Module again = parse_module(printed);
  EXPECT_EQ(again, m);
  EXPECT_EQ(print_module(again), printed);
  for (const auto& f : m.functions)
    EXPECT_TRUE(validate_ssa(f).ok()) << f.name << "\n" << validate_ssa(f).to_string();
}

TEST(Validate, DoubleDefinitionAcrossBlocks) {
  Module m = parse_module(R"(
define void @f(i32 %N) {
entry:
  %I = add i32 %N, 1
  br label %next
next:
  %I = sub i32 %N, 1
  ret void
}
)");
  auto report = validate_ssa(m.functions[0]);
  ASSERT_EQ(report.violations.size(), 1u) << report.to_string();
  EXPECT_EQ(report.violations[0].message, "double definition of %I");
  EXPECT_THROW(require_valid(m), Error);
}

TEST(Validate, ReportsStructuralViolations) {
  Function f = corpus_module("traverse").functions[0];
  f.blocks[3].instructions.clear();
  auto report = validate_ssa(f);
  ASSERT_EQ(report.violations.size(), 1u) << report.to_string();
  EXPECT_EQ(report.violations[0].message, "missing terminator in block loopend");

  Function g = corpus_module("traverse").functions[0];
  std::swap(g.blocks[2].instructions[0], g.blocks[2].instructions[3]);
  EXPECT_FALSE(validate_ssa(g).ok());
}

// One random break per program must yield exactly one violation.
TEST(Validate, MutationOracle) {
  Rng rng(5);
  for (int i = 0; i < 60; ++i) {
    auto prog = testing::random_program(rng, "m" + std::to_string(i));
    Function f = parse_module(prog.text).functions[0];
    ASSERT_TRUE(validate_ssa(f).ok());
    long kind = rng.int_in(0, 2);
    std::string expected;
    if (kind == 0) {
      // Drop the terminator of a return block.
      for (auto& b : f.blocks)
        if (b.terminator() && b.terminator()->op == Opcode::Ret) {
          b.instructions.pop_back();
          expected = "missing terminator in block " + b.label;
          break;
        }
    } else if (kind == 1) {
      // Duplicate a defining instruction in place.
      std::vector<std::pair<std::size_t, std::size_t>> sites;
      for (std::size_t bi = 0; bi < f.blocks.size(); ++bi)
        for (std::size_t ii = 0; ii < f.blocks[bi].instructions.size(); ++ii) {
          const auto& in = f.blocks[bi].instructions[ii];
          if (in.result && in.op != Opcode::Phi)
            sites.push_back({bi, ii});
        }
      if (sites.empty())
        continue;
      auto [bi, ii] = rng.pick(sites);
      auto copy = f.blocks[bi].instructions[ii];
      f.blocks[bi].instructions.insert(f.blocks[bi].instructions.begin() +
                                           static_cast<long>(ii) + 1,
                                       copy);
      expected = "double definition of %" + *copy.result;
    } else {
      // Read a register nobody defines.
      auto& b = f.blocks[static_cast<std::size_t>(rng.int_in(0, static_cast<long>(f.blocks.size()) - 1))];
      Instruction in;
      in.op = Opcode::Add;
      in.result = "fresh_mut";
      in.type = make_int(32);
      in.operands = {Value::reg("ghost"), Value::imm(1)};
      in.operand_types = {in.type, in.type};
      std::size_t at = 0;
      while (at < b.instructions.size() && b.instructions[at].op == Opcode::Phi)
        ++at;
      b.instructions.insert(b.instructions.begin() + static_cast<long>(at), in);
      expected = "use of undefined %ghost";
    }
    auto report = validate_ssa(f);
    ASSERT_EQ(report.violations.size(), 1u) << prog.text << report.to_string();
    EXPECT_EQ(report.violations[0].message, expected);
  }
}

TEST(Cfg, ArrayTraversalSuccessors) {
  auto next = build_cfg(corpus_module("traverse").functions[0]);
  EXPECT_EQ(next["looptest"], (std::set<std::string>{"loopbody", "loopend"}));
  EXPECT_TRUE(next["loopend"].empty());
  EXPECT_EQ(next["alloca"], (std::set<std::string>{"looptest"}));
}

TEST(Cfg, UndefinedLabelIsAnError) {
  Function f = corpus_module("traverse").functions[0];
  f.blocks[0].instructions.back().targets[0].label = "nowhere";
  try {
    build_cfg(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.stage(), "cfg");
  }
}

// Edges recovered by scanning the printed terminators.
TEST(Cfg, MatchesIndependentScanOnRandomGraphs) {
  Rng rng(3);
  const std::regex label_re("label %([A-Za-z0-9_]+)");
  for (int i = 0; i < 200; ++i) {
    Function f = testing::random_cfg(rng, static_cast<int>(rng.int_in(1, 9)));
    std::string text = print_function(f);
    SuccessorMap scanned;
    std::istringstream in(text);
    std::string line, current;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == ':' && line[0] != ' ') {
        current = line.substr(0, line.size() - 1);
        scanned[current];
        continue;
      }
      for (std::sregex_iterator it(line.begin(), line.end(), label_re), end; it != end; ++it)
        scanned[current].insert((*it)[1]);
    }
    EXPECT_EQ(build_cfg(f), scanned) << text;
    for (const auto& [from, tos] : build_cfg(f))
      for (const auto& to : tos)
        EXPECT_NE(f.find_block(to), nullptr);
  }
}

TEST(DefRef, Examples) {
  Instruction phi;
  phi.op = Opcode::Phi;
  phi.result = "x";
  phi.operands = {Value::reg("x1"), Value::reg("x2")};
  auto dr = def_ref(phi);
  EXPECT_EQ(dr.def, (std::set<std::string>{"x"}));
  EXPECT_EQ(dr.ref, (std::set<std::string>{"x1", "x2"}));

  Instruction ret;
  ret.op = Opcode::Ret;
  EXPECT_TRUE(def_ref(ret).def.empty());
  EXPECT_TRUE(def_ref(ret).ref.empty());

  Module m = corpus_module("traverse");
  const auto& gep = m.functions[0].blocks[2].instructions[0];
  ASSERT_EQ(gep.op, Opcode::GetElementPtr);
  dr = def_ref(gep);
  EXPECT_EQ(dr.def, (std::set<std::string>{"ElmPtr"}));
  EXPECT_EQ(dr.ref, (std::set<std::string>{"Arr", "I"}));
}

// Phi self-reference on loop-invariant values is legal SSA and is skipped.
TEST(DefRef, DefAndRefAreDisjointOnValidPrograms) {
  Rng rng(8);
  for (int i = 0; i < 30; ++i) {
    Function f = parse_module(testing::random_program(rng, "d").text).functions[0];
    for (const auto& b : f.blocks)
      for (const auto& in : b.instructions) {
        if (in.op == Opcode::Phi)
          continue;
        auto dr = def_ref(in);
        for (const auto& d : dr.def)
          EXPECT_FALSE(dr.ref.count(d)) << print_instruction(in);
      }
  }
}

} // namespace
} // namespace irenergy::ir
