#pragma once

#include "irenergy/ir/ir.hpp"

#include <string>
#include <string_view>

namespace irenergy::ir {

/// Parses and type-checks `.sir` text. Errors carry stage "parse" and the
/// line/column of the offending token.
Module parse_module(std::string_view text);

/// Parses a standalone type, resolving `%name` against `context` if given.
TypePtr parse_type(std::string_view text, const Module* context = nullptr);

std::string print_module(const Module& m);
std::string print_function(const Function& f);
std::string print_instruction(const Instruction& inst);

} // namespace irenergy::ir
