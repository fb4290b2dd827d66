#pragma once

#include "irenergy/hcir/program.hpp"

#include <string>
#include <string_view>

namespace irenergy::hcir {

struct PrintOptions {
  // `:- resource`, `:- pred` and `:- trust pred` lines before the clauses.
  bool directives = true;
  // `% origin fn:label` comment above each clause carrying a block cost.
  bool origins = false;
};

/// Clause layout: head, ` :-`, one body literal per line indented by two
/// spaces. Comparison clauses stay on one line. An empty program prints as
/// the empty string.
std::string print_hcir(const HCProgram& p, const PrintOptions& opts = {});
std::string print_clause(const Clause& c);
std::string print_literal(const Literal& l);
std::string print_assertion(const TrustAssertion& a);

/// Reads the printed form back. Cost metadata (origins, absorbed
/// instructions) is not part of the text; clause kinds are recovered from
/// clause shape. Errors carry stage "hcir-parse".
HCProgram parse_hcir(std::string_view text);

/// `inf`, `elem(k)` or an affine expression over s0, s1, ...
SizeExpr parse_size_expr(std::string_view text);

} // namespace irenergy::hcir
