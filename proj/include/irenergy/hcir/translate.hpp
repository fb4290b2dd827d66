#pragma once

#include "irenergy/hcir/params.hpp"
#include "irenergy/hcir/program.hpp"
#include "irenergy/ir/cfg.hpp"
#include "irenergy/ir/ir.hpp"

#include <memory>
#include <vector>

namespace irenergy::hcir {

/// Literals for one instruction read in isolation: arithmetic maps to a
/// builtin, icmp to a comparison predicate call, getelementptr to `nth`
/// (standing for the element access it addresses), alloca to `mk_list`,
/// call to a predicate call. load/store/phi/terminators throw, since they
/// only make sense inside a block.
std::vector<Literal> translate_instruction(const ir::Instruction& inst);

/// Module-level translation state: predicate names, callee copy-out slots,
/// comparison predicates already emitted and the type namer.
class Translator {
public:
  explicit Translator(const ir::Module& m);
  ~Translator();

  /// Clauses for one phi-free function, in emission order. Comparison
  /// predicates are emitted after the first clause group using them.
  std::vector<Clause> translate_function(const ir::Function& phi_free, const ParamSets& p,
                                         const ir::SuccessorMap& cfg);

  /// Program holding every clause produced so far plus all signatures.
  HCProgram program() const;

  struct Impl;

private:
  std::unique_ptr<Impl> impl_;
};

/// Full pipeline for every function: fixpoint, phi elimination, translation.
HCProgram translate_module(const ir::Module& m);

} // namespace irenergy::hcir
