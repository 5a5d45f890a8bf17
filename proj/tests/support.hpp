#pragma once

// shared helpers for the test binaries: tiny random program generator and
// the 2^n brute-force stability oracle

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "muasp/asp/ast.hpp"
#include "muasp/asp/parser.hpp"
#include "muasp/asp/solver.hpp"

namespace testsupport {

inline std::set<muasp::asp::Atom> atom_base(const muasp::asp::Program& gp) {
  std::set<muasp::asp::Atom> s;
  for (const muasp::asp::Rule& r : gp.rules) {
    if (r.head) s.insert(*r.head);
    for (const muasp::asp::Atom& a : r.pos_body) s.insert(a);
    for (const muasp::asp::Atom& a : r.neg_body) s.insert(a);
  }
  return s;
}

// all 2^n interpretations over the program's atoms, filtered by stability
inline std::vector<muasp::asp::AnswerSet> brute_force(const muasp::asp::Program& gp) {
  std::set<muasp::asp::Atom> base_set = atom_base(gp);
  std::vector<muasp::asp::Atom> base(base_set.begin(), base_set.end());
  std::vector<muasp::asp::AnswerSet> out;
  for (std::uint64_t mask = 0; mask < (1ull << base.size()); ++mask) {
    std::set<muasp::asp::Atom> i;
    for (std::size_t k = 0; k < base.size(); ++k)
      if (mask & (1ull << k)) i.insert(base[k]);
    if (muasp::asp::is_answer_set(gp, i)) out.push_back(muasp::asp::AnswerSet{std::move(i)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// <= 6 rules over <= 4 propositional atoms, random NAF, occasional
// constraints
inline muasp::asp::Program random_ground_program(std::mt19937& rng) {
  const char* names[] = {"a", "b", "c", "d"};
  std::uniform_int_distribution<int> natoms(2, 4);
  std::uniform_int_distribution<int> nrules(1, 6);
  std::uniform_int_distribution<int> pct(0, 99);
  int n = natoms(rng);
  int m = nrules(rng);
  std::ostringstream text;
  for (int r = 0; r < m; ++r) {
    std::string body;
    for (int a = 0; a < n; ++a) {
      if (pct(rng) < 35) {
        if (!body.empty()) body += ", ";
        if (pct(rng) < 50) body += "not ";
        body += names[a];
      }
    }
    bool constraint = pct(rng) < 15 && !body.empty();
    if (constraint) {
      text << ":- " << body << ".\n";
    } else {
      text << names[rng() % n];
      if (!body.empty()) text << " :- " << body;
      text << ".\n";
    }
  }
  return muasp::asp::parse_program(text.str());
}

}  // namespace testsupport
