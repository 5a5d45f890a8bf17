#pragma once

#include <set>

#include "muasp/asp/ast.hpp"
#include "muasp/asp/errors.hpp"

namespace muasp::asp {

// Rewrites each fact containing lo..hi range arguments into one fact per
// integer (cartesian over several ranges). Ranges anywhere else, or with
// lo > hi, raise ground_error.
Program expand_ranges(const Program& p);

// The constants and integer literals syntactically occurring in p (atom
// arguments and builtin operands alike). Expects ranges already expanded;
// arithmetic never extends this set.
std::set<Term> herbrand_universe(const Program& p);

// Naive instantiation: substitutes universe elements for all variables of
// every rule. Builtins are evaluated and dropped from instances where they
// hold; instances with a failed or non-evaluable builtin are discarded.
// Raises ground_error on unsafe rules, bad ranges, or integer overflow.
Program ground(const Program& p);

namespace detail {

// Truth of a variable-free builtin; non-evaluable comparisons (symbols under
// arithmetic or ordering) count as not holding. Throws ground_error on
// 32-bit overflow.
bool ground_builtin_holds(const Builtin& b);

// Instantiation restricted to atoms derivable in the positive
// overapproximation of p. Produces a subprogram of ground(p) with the same
// answer sets: any stable model is contained in the least model of the
// positive version, so instances needing an underivable positive body atom
// can never fire. solve() uses this form; ground() stays exhaustive.
Program relevant_ground(const Program& p);

}  // namespace detail

}  // namespace muasp::asp
