#pragma once

#include <set>
#include <vector>

#include "muasp/asp/ast.hpp"
#include "muasp/asp/errors.hpp"

namespace muasp::asp {

// Gelfond-Lifschitz construction. Constraints are first rewritten to
// `__c<k> :- not __c<k>, B` (fresh hidden atoms, one per constraint), then
// rules with a neg_body atom in i are dropped and survivors lose their
// neg_body, leaving a definite program.
Program reduct(const Program& gp, const std::set<Atom>& i);

// Minimal model of a definite ground program by fixpoint iteration.
// Throws muasp::error when dp contains negation or a constraint.
std::set<Atom> least_model(const Program& dp);

// Stability: least_model(reduct(gp, i)) equals i, and i violates no
// constraint of gp.
bool is_answer_set(const Program& gp, const std::set<Atom>& i);

// All answer sets, canonically ordered (lexicographic over sorted atoms).
// Empty result means the program is inconsistent. Grounding errors
// propagate.
std::vector<AnswerSet> solve(const Program& p);

bool is_consistent(const Program& p);

namespace detail {

// The constraint rewriting used by reduct and the solver, exposed so tests
// can pin it down.
Program rewrite_constraints(const Program& gp);

}  // namespace detail

}  // namespace muasp::asp
