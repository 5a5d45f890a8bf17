#include "muasp/asp/grounder.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "muasp/asp/parser.hpp"

using namespace muasp::asp;

namespace {

bool has_rule(const Program& p, const std::string& text) {
  Rule want = parse_program(text).rules.at(0);
  return std::find(p.rules.begin(), p.rules.end(), want) != p.rules.end();
}

}  // namespace

TEST(ExpandRanges, FactBecomesRun) {
  Program p = expand_ranges(parse_program("time(1..5)."));
  ASSERT_EQ(p.rules.size(), 5u);
  EXPECT_EQ(to_string(p.rules[0]), "time(1).");
  EXPECT_EQ(to_string(p.rules[4]), "time(5).");
}

TEST(ExpandRanges, SingletonRange) {
  Program p = expand_ranges(parse_program("time(3..3)."));
  ASSERT_EQ(p.rules.size(), 1u);
  EXPECT_EQ(to_string(p.rules[0]), "time(3).");
}

TEST(ExpandRanges, InvertedBoundsRejected) {
  EXPECT_THROW(expand_ranges(parse_program("time(5..1).")), ground_error);
}

TEST(ExpandRanges, RangeOutsideFactRejected) {
  EXPECT_THROW(expand_ranges(parse_program("p(1..2) :- q.")), ground_error);
  EXPECT_THROW(expand_ranges(parse_program("p :- q(1..2).")), ground_error);
}

TEST(ExpandRanges, CartesianOverTwoRanges) {
  Program p = expand_ranges(parse_program("cell(1..2,1..2)."));
  ASSERT_EQ(p.rules.size(), 4u);
  EXPECT_EQ(to_string(p.rules[0]), "cell(1,1).");
  EXPECT_EQ(to_string(p.rules[3]), "cell(2,2).");
}

TEST(Universe, ConstantsAndIntegers) {
  std::set<Term> u = herbrand_universe(parse_program("p(a). q(X) :- p(X)."));
  ASSERT_EQ(u.size(), 1u);
  EXPECT_TRUE(u.count(Term::constant("a")));
}

TEST(Universe, EmptyProgram) {
  EXPECT_TRUE(herbrand_universe(Program{}).empty());
}

TEST(Universe, BuiltinLiteralsCount) {
  std::set<Term> u =
      herbrand_universe(expand_ranges(parse_program("time(2..3). q(Y) :- time(X), Y = X + 1.")));
  EXPECT_TRUE(u.count(Term::integer(1)));  // from the builtin
  EXPECT_TRUE(u.count(Term::integer(2)));
  EXPECT_TRUE(u.count(Term::integer(3)));
  EXPECT_FALSE(u.count(Term::integer(4)));  // arithmetic never extends it
}

TEST(Ground, NextOverTime) {
  Program g = ground(parse_program("time(1..5). next(Y,X) :- time(X), time(Y), Y = X + 1."));
  std::size_t next_rules = 0;
  for (const Rule& r : g.rules)
    if (r.head->predicate == "next") ++next_rules;
  EXPECT_EQ(next_rules, 4u);
  EXPECT_TRUE(has_rule(g, "next(2,1) :- time(1), time(2)."));
  EXPECT_TRUE(has_rule(g, "next(5,4) :- time(4), time(5)."));
  EXPECT_FALSE(has_rule(g, "next(6,5) :- time(5), time(6)."));
}

TEST(Ground, SubstitutionIgnoresFacts) {
  Program g = ground(parse_program("u(a). p(X) :- q(X)."));
  EXPECT_TRUE(has_rule(g, "p(a) :- q(a)."));
}

TEST(Ground, InequalityFilters) {
  Program g = ground(parse_program("lane(ns). lane(ew). pair(L1,L2) :- lane(L1), lane(L2), L1 != L2."));
  std::size_t pairs = 0;
  for (const Rule& r : g.rules)
    if (r.head->predicate == "pair") ++pairs;
  EXPECT_EQ(pairs, 2u);
  EXPECT_TRUE(has_rule(g, "pair(ns,ew) :- lane(ns), lane(ew)."));
  EXPECT_TRUE(has_rule(g, "pair(ew,ns) :- lane(ew), lane(ns)."));
}

TEST(Ground, NoVariablesSurvive) {
  Program g = ground(parse_program(
      "time(1..3). lane(ns). lane(ew).\n"
      "x(L,T) :- lane(L), time(T), not y(L,T).\n"
      "y(L,T) :- lane(L), time(T), not x(L,T).\n"));
  for (const Rule& r : g.rules) {
    EXPECT_TRUE(r.is_ground()) << to_string(r);
    EXPECT_TRUE(r.builtins.empty()) << to_string(r);
  }
}

TEST(Ground, MixedSortComparisons) {
  // ns = 1 is false, ns != 1 is true, ns < 1 never evaluates
  Program g = ground(parse_program(
      "v(ns). v(1).\n"
      "eq(X) :- v(X), X = ns.\n"
      "ne(X) :- v(X), X != ns.\n"
      "lt(X) :- v(X), X < ns.\n"));
  EXPECT_TRUE(has_rule(g, "eq(ns) :- v(ns)."));
  EXPECT_FALSE(has_rule(g, "eq(1) :- v(1)."));
  EXPECT_TRUE(has_rule(g, "ne(1) :- v(1)."));
  EXPECT_FALSE(has_rule(g, "ne(ns) :- v(ns)."));
  for (const Rule& r : g.rules) EXPECT_NE(r.head->predicate, "lt") << to_string(r);
}

TEST(Ground, SymbolArithmeticInstancesDrop) {
  // under exhaustive substitution X also takes the value ns; that instance
  // cannot evaluate ns + 1 and is discarded rather than an error
  Program g = ground(parse_program("n(1). n(2). n(ns). m(Y) :- n(X), Y = X + 1."));
  EXPECT_TRUE(has_rule(g, "m(2) :- n(1)."));
  EXPECT_FALSE(has_rule(g, "m(3) :- n(2).")) << "3 is outside the universe";
  for (const Rule& r : g.rules)
    if (r.head->predicate == "m") EXPECT_TRUE(r.head->args[0].is_integer());
}

TEST(Ground, OverflowIsError) {
  EXPECT_THROW(ground(parse_program("n(2147483647). m(Y) :- n(X), Y = X + 1, Y > 0.")),
               ground_error);
}

TEST(Ground, UnsafeRuleRejected) {
  Program p;
  p.rules = parse_program("q(a).").rules;
  Rule bad;
  bad.head = parse_atom("p(X)");
  p.rules.push_back(bad);  // bypasses the parser's own check
  EXPECT_THROW(ground(p), ground_error);
}

TEST(Ground, GroundProgramFixpoint) {
  Program p = parse_program("a. b :- a, not c.");
  Program g = ground(p);
  EXPECT_EQ(g, p);
  EXPECT_EQ(ground(g), g);
}

TEST(RelevantGround, SubsetOfNaive) {
  Program p = parse_program(
      "time(1..4). lane(ns). lane(ew).\n"
      "seen(L,T) :- lane(L), time(T).\n"
      "later(L,T1) :- seen(L,T), time(T1), T1 = T + 1.\n");
  Program full = ground(p);
  Program rel = detail::relevant_ground(p);
  for (const Rule& r : rel.rules)
    EXPECT_NE(std::find(full.rules.begin(), full.rules.end(), r), full.rules.end())
        << to_string(r);
  EXPECT_LT(rel.rules.size(), full.rules.size());
}

TEST(RelevantGround, KeepsUnderivableNegation) {
  // q can never be derived, still the constraint must survive grounding
  Program rel = detail::relevant_ground(parse_program("p :- not q. :- p, not q."));
  ASSERT_EQ(rel.rules.size(), 2u);
  EXPECT_TRUE(has_rule(rel, "p :- not q."));
}

TEST(RelevantGround, BindingStaysInUniverse) {
  Program rel = detail::relevant_ground(parse_program("time(1..3). m(Y) :- time(X), Y = X + 1."));
  std::size_t m = 0;
  for (const Rule& r : rel.rules)
    if (r.head->predicate == "m") ++m;
  EXPECT_EQ(m, 2u);  // m(2), m(3); m(4) would leave the universe
}
