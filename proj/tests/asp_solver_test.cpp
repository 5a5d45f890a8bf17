#include "muasp/asp/solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "muasp/asp/grounder.hpp"
#include "muasp/asp/parser.hpp"
#include "support.hpp"

using namespace muasp::asp;
using testsupport::brute_force;
using testsupport::random_ground_program;

namespace {

std::set<Atom> atoms_named(std::initializer_list<const char*> names) {
  std::set<Atom> s;
  for (const char* n : names) s.insert(parse_ground_atom(n));
  return s;
}

const char* kController =
    "device_ok :- test_ok.\n"
    "device_fault :- not test_ok.\n"
    "wait :- not wait, not sensor_input.\n";

Program controller_with(std::initializer_list<const char*> facts) {
  std::string text = kController;
  for (const char* f : facts) {
    text += f;
    text += ".\n";
  }
  return parse_program(text);
}

}  // namespace

TEST(Reduct, EmptyInterpretationKeepsStrippedRule) {
  Program gp = parse_program("p :- not q.");
  Program r = reduct(gp, {});
  ASSERT_EQ(r.rules.size(), 1u);
  EXPECT_EQ(to_string(r.rules[0]), "p.");
}

TEST(Reduct, BlockedRuleDropped) {
  Program gp = parse_program("p :- not q.");
  EXPECT_TRUE(reduct(gp, atoms_named({"q"})).rules.empty());
}

TEST(Reduct, OddLoopBlocksItself) {
  Program gp = parse_program("wait :- not wait, not sensor_input.");
  EXPECT_TRUE(reduct(gp, atoms_named({"wait"})).rules.empty());
}

TEST(Reduct, ConstraintBecomesHiddenOddLoop) {
  Program gp = parse_program(":- a.");
  Program r = reduct(gp, {});
  ASSERT_EQ(r.rules.size(), 1u);
  EXPECT_EQ(to_string(r.rules[0]), "__c0 :- a.");
  Atom hidden;  // reserved name, unreachable from the surface syntax
  hidden.predicate = "__c0";
  EXPECT_TRUE(is_reserved_atom(hidden));
  EXPECT_TRUE(reduct(gp, {hidden}).rules.empty());
}

TEST(Reduct, DefiniteProgramUntouched) {
  Program dp = parse_program("p. q :- p. r :- q, p.");
  EXPECT_EQ(reduct(dp, {}), dp);
  EXPECT_EQ(reduct(dp, atoms_named({"p", "q", "r"})), dp);
}

TEST(LeastModel, Chain) {
  EXPECT_EQ(least_model(parse_program("p. q :- p.")), atoms_named({"p", "q"}));
}

TEST(LeastModel, Empty) {
  EXPECT_TRUE(least_model(Program{}).empty());
}

TEST(LeastModel, UnfoundedLoopExcluded) {
  EXPECT_TRUE(least_model(parse_program("a :- b. b :- a.")).empty());
}

TEST(LeastModel, RejectsNegationAndConstraints) {
  EXPECT_THROW(least_model(parse_program("p :- not q.")), muasp::error);
  EXPECT_THROW(least_model(parse_program(":- q.")), muasp::error);
}

TEST(IsAnswerSet, ControllerPositiveCase) {
  Program gp = controller_with({"test_ok", "sensor_input"});
  EXPECT_TRUE(is_answer_set(gp, atoms_named({"test_ok", "sensor_input", "device_ok"})));
  EXPECT_FALSE(is_answer_set(gp, atoms_named({"test_ok", "sensor_input", "device_fault"})));
}

TEST(IsAnswerSet, SelfBlockingAtomHasNone) {
  Program gp = parse_program("p :- not p.");
  EXPECT_FALSE(is_answer_set(gp, {}));
  EXPECT_FALSE(is_answer_set(gp, atoms_named({"p"})));
}

TEST(IsAnswerSet, ViolatedConstraint) {
  Program gp = parse_program("a. :- a.");
  EXPECT_FALSE(is_answer_set(gp, atoms_named({"a"})));
  EXPECT_FALSE(is_answer_set(gp, {}));
}

TEST(Solve, TwoAnswerSets) {
  std::vector<AnswerSet> r = solve(parse_program("p :- not q. q :- not p."));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].atoms, atoms_named({"p"}));
  EXPECT_EQ(r[1].atoms, atoms_named({"q"}));
}

TEST(Solve, SingleFact) {
  std::vector<AnswerSet> r = solve(parse_program("p."));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].atoms, atoms_named({"p"}));
}

TEST(Solve, EmptyProgramHasEmptyAnswerSet) {
  std::vector<AnswerSet> r = solve(Program{});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r[0].atoms.empty());
}

TEST(Solve, ControllerTruthTable) {
  EXPECT_TRUE(solve(controller_with({})).empty());

  std::vector<AnswerSet> one = solve(controller_with({"sensor_input"}));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].atoms, atoms_named({"sensor_input", "device_fault"}));

  std::vector<AnswerSet> two = solve(controller_with({"sensor_input", "test_ok"}));
  ASSERT_EQ(two.size(), 1u);
  EXPECT_EQ(two[0].atoms, atoms_named({"sensor_input", "test_ok", "device_ok"}));
}

TEST(Solve, HiddenAtomsNeverEscape) {
  std::vector<AnswerSet> r = solve(parse_program("a :- not b. b :- not a. :- b."));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].atoms, atoms_named({"a"}));
}

TEST(Solve, NonGroundProgram) {
  std::vector<AnswerSet> r = solve(parse_program(
      "lane(ns). lane(ew).\n"
      "green(L) :- lane(L), not red(L).\n"
      "red(L) :- lane(L), not green(L).\n"
      ":- green(ns), green(ew).\n"));
  ASSERT_EQ(r.size(), 3u);
  for (const AnswerSet& s : r)
    EXPECT_FALSE(s.contains(parse_ground_atom("green(ns)")) &&
                 s.contains(parse_ground_atom("green(ew)")));
}

TEST(Solve, DeterministicAcrossCalls) {
  Program p = parse_program("a :- not b. b :- not a. c :- a. c :- b.");
  EXPECT_EQ(solve(p), solve(p));
}

TEST(IsConsistent, Examples) {
  EXPECT_TRUE(is_consistent(controller_with({"sensor_input"})));
  EXPECT_FALSE(is_consistent(parse_program(":- not a.")));
  EXPECT_TRUE(is_consistent(parse_program("a. :- not a.")));
}

TEST(SolveProperty, MatchesBruteForceOracle) {
  std::mt19937 rng(20260822);
  for (int trial = 0; trial < 150; ++trial) {
    Program gp = random_ground_program(rng);
    std::vector<AnswerSet> got = solve(gp);
    std::vector<AnswerSet> want = brute_force(gp);
    ASSERT_EQ(got, want) << "program:\n" << to_string(gp);
  }
}

TEST(SolveProperty, AntichainAndModelProperty) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    Program gp = random_ground_program(rng);
    std::vector<AnswerSet> sets = solve(gp);
    for (std::size_t i = 0; i < sets.size(); ++i)
      for (std::size_t j = 0; j < sets.size(); ++j) {
        if (i == j) continue;
        bool subset = std::includes(sets[j].atoms.begin(), sets[j].atoms.end(),
                                    sets[i].atoms.begin(), sets[i].atoms.end());
        EXPECT_FALSE(subset && sets[i].atoms != sets[j].atoms)
            << "strict subset answer sets in:\n" << to_string(gp);
      }
    for (const AnswerSet& s : sets) {
      for (const Rule& r : gp.rules) {
        bool body = true;
        for (const Atom& a : r.pos_body) body = body && s.contains(a);
        for (const Atom& a : r.neg_body) body = body && !s.contains(a);
        if (!body) continue;
        if (r.is_constraint())
          FAIL() << "violated constraint " << to_string(r) << " in " << to_string(gp);
        else
          EXPECT_TRUE(s.contains(*r.head)) << to_string(r);
      }
    }
  }
}

TEST(SolveProperty, NaiveAndRestrictedGroundingAgree) {
  // solve() grounds by derivability; the oracle enumerates over the naive
  // grounding. Any disagreement would surface here.
  std::mt19937 rng(99);
  const char* preds[] = {"p", "q", "r"};
  const char* consts[] = {"a", "b"};
  std::uniform_int_distribution<int> pct(0, 99);
  for (int trial = 0; trial < 80; ++trial) {
    std::ostringstream text;
    for (const char* c : consts)
      for (const char* p : preds)
        if (pct(rng) < 30) text << p << "(" << c << ").\n";
    int nrules = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < nrules; ++i) {
      const char* h = preds[rng() % 3];
      const char* b1 = preds[rng() % 3];
      text << h << "(X) :- " << b1 << "(X)";
      if (pct(rng) < 60) text << ", not " << preds[rng() % 3] << "(X)";
      text << ".\n";
    }
    Program p = parse_program(text.str());
    ASSERT_EQ(solve(p), brute_force(ground(p))) << text.str();
  }
}
