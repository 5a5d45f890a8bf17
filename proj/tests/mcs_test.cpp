#include "muasp/mcs/mcs.hpp"

#include <gtest/gtest.h>

#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "muasp/asp/parser.hpp"

using namespace muasp;
using mcs::BridgeHead;
using mcs::BridgeLit;
using mcs::BridgeRule;
using mcs::ContextRef;
using mcs::DataState;
using mcs::Designator;
using mcs::FactStoreContext;
using mcs::ServiceContext;
using mcs::System;

namespace {

asp::Atom atom(const std::string& text) { return asp::parse_atom(text); }

ContextRef ctx(const std::string& name) { return ContextRef{name, std::nullopt}; }

ContextRef des(const std::string& role, const std::string& var) {
  return ContextRef{{}, Designator{role, var}};
}

BridgeRule add_rule(const std::string& dest, const std::string& head,
                    std::vector<BridgeLit> body) {
  return BridgeRule{dest, BridgeHead{"add", atom(head)}, std::move(body)};
}

std::set<asp::Atom> facts(std::initializer_list<const char*> texts) {
  std::set<asp::Atom> out;
  for (const char* t : texts) out.insert(atom(t));
  return out;
}

std::unique_ptr<FactStoreContext> store(const std::string& name,
                                        std::vector<std::string> roles,
                                        std::set<asp::Atom> init = {}) {
  return std::make_unique<FactStoreContext>(name, std::move(roles),
                                            std::move(init));
}

}  // namespace

TEST(BridgeResolution, ConcreteRuleResolvesToItself) {
  BridgeRule r = add_rule("t", "go", {{ctx("c1"), atom("ready")}});
  auto out = mcs::resolve_designators(r, [](const std::string&) {
    return std::vector<std::string>{};
  });
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], r);
}

TEST(BridgeResolution, OneDesignatorOneRulePerRegistrant) {
  BridgeRule r = add_rule("t", "car(C)", {{des("anycar", "C"), atom("car(C)")}});
  auto lookup = [](const std::string& role) {
    return role == "anycar" ? std::vector<std::string>{"c1", "c2"}
                            : std::vector<std::string>{};
  };
  auto out = mcs::resolve_designators(r, lookup);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], add_rule("t", "car(c1)", {{ctx("c1"), atom("car(c1)")}}));
  EXPECT_EQ(out[1], add_rule("t", "car(c2)", {{ctx("c2"), atom("car(c2)")}}));
}

TEST(BridgeResolution, UnknownRoleLeavesRuleDormant) {
  BridgeRule r = add_rule("t", "car(C)", {{des("ghost", "C"), atom("car(C)")}});
  auto out = mcs::resolve_designators(
      r, [](const std::string&) { return std::vector<std::string>{}; });
  EXPECT_TRUE(out.empty());
}

TEST(BridgeResolution, TwoVariablesTakeTheCartesianProduct) {
  BridgeRule r = add_rule("t", "pair(X,Y)", {{des("car", "X"), atom("a")},
                                             {des("car", "Y"), atom("b")}});
  auto lookup = [](const std::string&) {
    return std::vector<std::string>{"c1", "c2"};
  };
  auto out = mcs::resolve_designators(r, lookup);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[0].head.atom, atom("pair(c1,c1)"));
  EXPECT_EQ(out[1].head.atom, atom("pair(c1,c2)"));
  EXPECT_EQ(out[2].head.atom, atom("pair(c2,c1)"));
  EXPECT_EQ(out[3].head.atom, atom("pair(c2,c2)"));
  EXPECT_EQ(out[1].body[0].ref, ctx("c1"));
  EXPECT_EQ(out[1].body[1].ref, ctx("c2"));
}

TEST(BridgeResolution, DestMayBeADesignatorToo) {
  BridgeRule r = add_rule("a_traffic_light(T)", "want_go(C,T,ns,2)",
                          {{des("anycar", "C"), atom("want_go(C,T,ns,2)")}});
  auto lookup = [](const std::string& role) {
    if (role == "anycar") return std::vector<std::string>{"c1", "c2"};
    if (role == "a_traffic_light") return std::vector<std::string>{"t1"};
    return std::vector<std::string>{};
  };
  auto out = mcs::resolve_designators(r, lookup);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].dest, "t1");
  EXPECT_EQ(out[0].head.atom, atom("want_go(c1,t1,ns,2)"));
  EXPECT_EQ(out[0].body[0].ref, ctx("c1"));
  EXPECT_EQ(out[0].body[0].atom, atom("want_go(c1,t1,ns,2)"));
  EXPECT_EQ(out[1].head.atom, atom("want_go(c2,t1,ns,2)"));
  EXPECT_FALSE(mcs::is_concrete(r));
  EXPECT_TRUE(mcs::is_concrete(out[0]));
}

TEST(BridgeResolution, SharedVariableCoRefers) {
  BridgeRule r = add_rule("t", "ok(X)", {{des("car", "X"), atom("a")},
                                         {des("car", "X"), atom("b")}});
  auto lookup = [](const std::string&) {
    return std::vector<std::string>{"c1", "c2"};
  };
  auto out = mcs::resolve_designators(r, lookup);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].body[0].ref, ctx("c1"));
  EXPECT_EQ(out[0].body[1].ref, ctx("c1"));
  EXPECT_EQ(out[1].head.atom, atom("ok(c2)"));
}

TEST(BridgeResolution, Rejections) {
  auto one = [](const std::string&) { return std::vector<std::string>{"c1"}; };
  BridgeRule conflicting = add_rule(
      "t", "x", {{des("car", "X"), atom("a")}, {des("light", "X"), atom("b")}});
  EXPECT_THROW(mcs::resolve_designators(conflicting, one), muasp::error);

  BridgeRule loose_head = add_rule("t", "seen(Z)", {{ctx("c1"), atom("a")}});
  EXPECT_THROW(mcs::resolve_designators(loose_head, one), muasp::error);

  BridgeRule loose_body = add_rule("t", "x", {{ctx("c1"), atom("p(V)")}});
  EXPECT_THROW(mcs::resolve_designators(loose_body, one), muasp::error);

  BridgeRule bodyless{"t", BridgeHead{"add", atom("x")}, {}};
  EXPECT_THROW(mcs::resolve_designators(bodyless, one), muasp::error);

  BridgeRule deleter{"t", BridgeHead{"del", atom("x")},
                     {{ctx("c1"), atom("a")}}};
  EXPECT_THROW(mcs::resolve_designators(deleter, one), muasp::error);
}

TEST(Applicability, AllBodyAtomsMustHold) {
  DataState s;
  s.sets["c1"] = asp::AnswerSet{facts({"a", "b"})};
  s.sets["c2"] = asp::AnswerSet{facts({"c"})};
  EXPECT_TRUE(mcs::applicable(
      add_rule("t", "x", {{ctx("c1"), atom("a")}, {ctx("c2"), atom("c")}}), s));
  EXPECT_FALSE(mcs::applicable(
      add_rule("t", "x", {{ctx("c1"), atom("a")}, {ctx("c2"), atom("d")}}), s));
  EXPECT_THROW(
      mcs::applicable(add_rule("t", "x", {{ctx("nowhere"), atom("a")}}), s),
      muasp::error);
  BridgeRule schematic =
      add_rule("t", "car(C)", {{des("anycar", "C"), atom("car(C)")}});
  EXPECT_THROW(mcs::applicable(schematic, s), muasp::error);
}

TEST(Applicability, AppKeepsDeclarationOrderAndSources) {
  DataState s;
  s.sets["c1"] = asp::AnswerSet{facts({"a"})};
  s.sets["c2"] = asp::AnswerSet{facts({"b"})};
  std::vector<BridgeRule> rules = {
      add_rule("t", "second", {{ctx("c2"), atom("b")}, {ctx("c1"), atom("a")}}),
      add_rule("t", "skipped", {{ctx("c1"), atom("missing")}}),
      add_rule("u", "third", {{ctx("c1"), atom("a")}}),
  };
  auto heads = mcs::app(s, rules);
  ASSERT_EQ(heads.size(), 2u);
  EXPECT_EQ(heads[0].dest, "t");
  EXPECT_EQ(heads[0].head.atom, atom("second"));
  EXPECT_EQ(heads[0].source, "c2");
  EXPECT_EQ(heads[1].dest, "u");
  EXPECT_EQ(heads[1].source, "c1");
}

TEST(Equilibrium, NoRulesConvergeInOneStep) {
  System M;
  M.contexts.push_back(store("c1", {}, facts({"a"})));
  M.contexts.push_back(store("c2", {}));
  auto eq = mcs::compute_equilibrium(M, mcs::initial_state(M));
  EXPECT_EQ(eq.steps, 1);
  EXPECT_EQ(eq.state.sets.at("c1"), (asp::AnswerSet{facts({"a"})}));
  EXPECT_TRUE(eq.state.sets.at("c2").atoms.empty());
  EXPECT_TRUE(eq.state.failed.empty());
}

TEST(Equilibrium, ThreeContextChainTakesThreeSteps) {
  System M;
  M.contexts.push_back(store("c1", {}, facts({"a"})));
  M.contexts.push_back(store("c2", {}));
  M.contexts.push_back(store("c3", {}));
  M.rules = {add_rule("c2", "b", {{ctx("c1"), atom("a")}}),
             add_rule("c3", "c", {{ctx("c2"), atom("b")}})};
  auto eq = mcs::compute_equilibrium(M, mcs::initial_state(M));
  EXPECT_EQ(eq.steps, 3);
  EXPECT_TRUE(eq.state.sets.at("c3").contains(atom("c")));

  // a reached equilibrium is a fixpoint of step
  DataState again = mcs::step(M, eq.state);
  EXPECT_EQ(again, eq.state);
}

TEST(Equilibrium, ReplaceOscillationIsReportedWithBothStates) {
  System M;
  M.contexts.push_back(store("c1", {}, facts({"p(1)"})));
  M.rules = {
      BridgeRule{"c1", BridgeHead{"replace", atom("p(2)")},
                 {{ctx("c1"), atom("p(1)")}}},
      BridgeRule{"c1", BridgeHead{"replace", atom("p(1)")},
                 {{ctx("c1"), atom("p(2)")}}},
  };
  try {
    mcs::compute_equilibrium(M, mcs::initial_state(M), 10);
    FAIL() << "expected non-convergence";
  } catch (const mcs::equilibrium_error& e) {
    EXPECT_NE(e.previous, e.last);
    EXPECT_EQ(e.time, -1);
    std::set<asp::AnswerSet> seen = {e.previous.sets.at("c1"),
                                     e.last.sets.at("c1")};
    std::set<asp::AnswerSet> expect = {asp::AnswerSet{facts({"p(1)"})},
                                       asp::AnswerSet{facts({"p(2)"})}};
    EXPECT_EQ(seen, expect);
  }
}

TEST(Equilibrium, RandomMonotoneSystemsConvergeWithinHeadBound) {
  std::mt19937 rng(20260822u);
  std::uniform_int_distribution<int> pct(0, 99);
  const char* preds[] = {"p", "q", "r"};
  auto pool_atom = [&]() {
    return atom(std::string(preds[rng() % 3]) + "(" +
                std::to_string(1 + int(rng() % 3)) + ")");
  };
  for (int trial = 0; trial < 100; ++trial) {
    System M;
    int ncontexts = 2 + int(rng() % 4);
    std::vector<std::string> names;
    for (int i = 0; i < ncontexts; ++i) {
      std::string name = "x" + std::to_string(i + 1);
      names.push_back(name);
      std::vector<std::string> roles;
      if (pct(rng) < 60) roles.push_back(pct(rng) < 50 ? "alpha" : "beta");
      std::set<asp::Atom> init;
      for (int k = 0; k < 9; ++k)
        if (pct(rng) < 25) init.insert(pool_atom());
      M.contexts.push_back(store(name, std::move(roles), std::move(init)));
    }
    int nrules = 1 + int(rng() % 10);
    for (int r = 0; r < nrules; ++r) {
      std::string dest = names[rng() % names.size()];
      std::vector<BridgeLit> body;
      bool designated = pct(rng) < 30;
      if (designated) {
        body.push_back({des(pct(rng) < 50 ? "alpha" : "beta", "V"),
                        pool_atom()});
      } else {
        body.push_back({ctx(names[rng() % names.size()]), pool_atom()});
      }
      if (pct(rng) < 40)
        body.push_back({ctx(names[rng() % names.size()]), pool_atom()});
      asp::Atom head =
          designated && pct(rng) < 50 ? atom("seen(V)") : pool_atom();
      M.rules.push_back(BridgeRule{dest, BridgeHead{"add", head},
                                   std::move(body)});
    }

    std::vector<BridgeRule> resolved = mcs::resolve_all(M);
    std::set<std::pair<std::string, asp::Atom>> head_instances;
    for (const BridgeRule& r : resolved)
      head_instances.insert({r.dest, r.head.atom});
    int bound = int(head_instances.size()) + 1;

    auto eq = mcs::compute_equilibrium(M, mcs::initial_state(M));
    EXPECT_LE(eq.steps, bound) << "trial " << trial;
    EXPECT_EQ(mcs::step(M, eq.state), eq.state) << "trial " << trial;
  }
}

TEST(ServiceContextTest, AccSelectsFirstAndTagsTrueQueries) {
  shell::ServiceDescriptor d;
  d.program = asp::parse_program("p :- not q. q :- not p.");
  d.queries = {
      {asp::QueryMode::BRAVE, atom("p")},    {asp::QueryMode::KNOWN, atom("p")},
      {asp::QueryMode::NAF_SOME, atom("p")}, {asp::QueryMode::NOT_ALL, atom("p")},
      {asp::QueryMode::POSSIBLE, atom("p")},
  };
  ServiceContext c("svc", {}, d);
  asp::AnswerSet s = c.acc();
  EXPECT_EQ(s.atoms,
            facts({"p", "brave_p", "m_p", "some_not_p"}));
}

TEST(ServiceContextTest, InconsistencyBecomesFailedFlag) {
  shell::ServiceDescriptor d;
  d.program = asp::parse_program("ok :- go.\n:- not active.");
  d.activation = atom("active");
  System M;
  M.contexts.push_back(
      std::make_unique<ServiceContext>("svc", std::vector<std::string>{}, d,
                                       /*activated=*/false));
  DataState s = mcs::initial_state(M);
  EXPECT_TRUE(s.failed.count("svc"));
  EXPECT_TRUE(s.sets.at("svc").atoms.empty());

  // once activated the same context recovers
  ServiceContext live("svc", {}, d, /*activated=*/true);
  EXPECT_EQ(live.acc().atoms, facts({"active"}));
}

TEST(ServiceContextTest, ActivationFactSurvivesReplaceAndDel) {
  shell::ServiceDescriptor d;
  d.program = asp::parse_program(":- not active(t1).");
  d.activation = atom("active(t1)");
  ServiceContext c("svc", {}, d);
  c.update(BridgeHead{"del", atom("active(t1)")});
  c.apply(BridgeHead{"replace", atom("active(t2)")}, "elsewhere");
  EXPECT_EQ(c.injected(), facts({"active(t1)", "active(t2)"}));
}

TEST(FactStoreTest, UpdateOps) {
  FactStoreContext c("c", {}, facts({"p(1)", "p(2)", "q(1)"}));
  c.update(BridgeHead{"del", atom("p(1)")});
  EXPECT_EQ(c.facts(), facts({"p(2)", "q(1)"}));
  c.update(BridgeHead{"replace", atom("p(7)")});
  EXPECT_EQ(c.facts(), facts({"p(7)", "q(1)"}));
  c.apply(BridgeHead{"add", atom("r(1)")}, "other");
  EXPECT_EQ(c.facts(), facts({"p(7)", "q(1)", "r(1)"}));
  EXPECT_THROW(c.apply(BridgeHead{"del", atom("q(1)")}, "other"), muasp::error);
  EXPECT_THROW(c.update(BridgeHead{"grow", atom("q(1)")}), muasp::error);
}

namespace {

// store -> service chain used by the timed-run tests
System make_timed_system() {
  System M;
  M.contexts.push_back(store("src", {"feeder"}));
  shell::ServiceDescriptor d;
  d.program = asp::parse_program("lim(1..5). ok(X) :- req(X), lim(X).");
  M.contexts.push_back(
      std::make_unique<ServiceContext>("svc", std::vector<std::string>{}, d));
  M.rules = {add_rule("svc", "req(2)", {{ctx("src"), atom("want(2)")}})};
  return M;
}

}  // namespace

TEST(TimedRun, UpdatesLandBeforeTheTickEquilibrium) {
  System M = make_timed_system();
  mcs::Schedule schedule;
  schedule[1] = {{"src", BridgeHead{"add", atom("want(2)")}}};
  auto records = mcs::timed_run(M, schedule, 2);
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[0].time, 0);
  EXPECT_FALSE(records[0].eq.state.sets.at("svc").contains(atom("ok(2)")));
  EXPECT_TRUE(records[1].eq.state.sets.at("svc").contains(atom("ok(2)")));
  // kbs persist, so the derived atom is still there a tick later
  EXPECT_TRUE(records[2].eq.state.sets.at("svc").contains(atom("ok(2)")));
}

TEST(TimedRun, EmptyScheduleStaysConstant) {
  System M = make_timed_system();
  auto records = mcs::timed_run(M, {}, 3);
  ASSERT_EQ(records.size(), 4u);
  for (const auto& rec : records) {
    EXPECT_EQ(rec.eq.state, records[0].eq.state);
    EXPECT_EQ(rec.eq.steps, 1);
  }
}

TEST(TimedRun, DestTriggerFiltersRulesPerTick) {
  System M = make_timed_system();
  std::vector<int> seen_times;
  M.find("svc")->trigger = [&seen_times](int t, const BridgeRule&) {
    seen_times.push_back(t);
    return t >= 2;
  };
  mcs::Schedule schedule;
  schedule[0] = {{"src", BridgeHead{"add", atom("want(2)")}}};
  auto records = mcs::timed_run(M, schedule, 2);
  EXPECT_FALSE(records[0].eq.state.sets.at("svc").contains(atom("ok(2)")));
  EXPECT_FALSE(records[1].eq.state.sets.at("svc").contains(atom("ok(2)")));
  EXPECT_TRUE(records[2].eq.state.sets.at("svc").contains(atom("ok(2)")));
  EXPECT_FALSE(seen_times.empty());
  EXPECT_EQ(seen_times.front(), 0);
}

TEST(TimedRun, NonConvergenceCarriesTheTickTime) {
  System M;
  M.contexts.push_back(store("c1", {}, facts({"p(1)"})));
  M.rules = {
      BridgeRule{"c1", BridgeHead{"replace", atom("p(2)")},
                 {{ctx("c1"), atom("p(1)")}}},
      BridgeRule{"c1", BridgeHead{"replace", atom("p(1)")},
                 {{ctx("c1"), atom("p(2)")}}},
  };
  try {
    mcs::timed_run(M, {}, 4, /*max_iter=*/8);
    FAIL() << "expected non-convergence";
  } catch (const mcs::equilibrium_error& e) {
    EXPECT_EQ(e.time, 0);
    EXPECT_NE(e.previous, e.last);
  }
}

TEST(TimedRun, ScheduledUpdateToUnknownContextThrows) {
  System M = make_timed_system();
  mcs::Schedule schedule;
  schedule[0] = {{"nobody", BridgeHead{"add", atom("x")}}};
  EXPECT_THROW(mcs::timed_run(M, schedule, 1), muasp::error);
}
