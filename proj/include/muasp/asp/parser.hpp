#pragma once

#include <string>
#include <string_view>

#include "muasp/asp/ast.hpp"
#include "muasp/asp/errors.hpp"

namespace muasp::asp {

// Parses program text in the concrete surface syntax:
//   - rules end with '.'; ':-' separates head and body
//   - 'not' (whitespace-delimited keyword) marks NAF literals
//   - '%' starts a line comment
//   - ranges lo..hi (integer literals) in fact arguments
//   - identifiers [a-z][A-Za-z0-9_]* are constants/predicates,
//     [A-Z][A-Za-z0-9_]* are variables
//   - builtins: infix = != < <= > >= over +/- integer arithmetic
//   - an escaped underscore '\_' in an identifier normalizes to '_'
//
// Every rule is checked for safety: a variable must occur in a positive,
// non-builtin body atom, unless it is bound as the left side of an '='
// whose right side is already bound. Violations raise parse_error naming
// the variable.
Program parse_program(std::string_view text);

// Single-construct helpers for descriptor/system files and the CLI.
Atom parse_atom(std::string_view text);         // schematic atoms allowed
Atom parse_ground_atom(std::string_view text);  // rejects variables

// Re-checks rule safety on an arbitrary Program (parse_program already
// guarantees it for parsed text). Throws ground_error naming the variable.
void check_safety(const Program& p);

}  // namespace muasp::asp
