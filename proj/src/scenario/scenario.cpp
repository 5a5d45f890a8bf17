#include "muasp/scenario/scenario.hpp"

#include <memory>
#include <sstream>

#include "json.hpp"
#include "muasp/asp/parser.hpp"
#include "muasp/mcs/agent_context.hpp"
#include "muasp/msg/tcp.hpp"

namespace muasp::scenario {

const char* kTrafficLightSource = R"(
tln(t1).   % traffic-light identifier
active(t1).

:- not active(t1).                    % sensor check: activation
:- lane(L), time(T), fault_tl(t1,L,T).   % sensor check: possible fault

% input: cars
car(c1).
car(c2).
car(c3).
car(c4).
car(c5).

% input: requests
want_go(c1,t1,ns,2).
want_go(c2,t1,ns,2).
want_go(c3,t1,ew,2).
want_go(c4,t1,ns,4).
want_go(c5,t1,ew,4).

lane(ns).
lane(ew).
time(1..5).
next(Y,X) :- time(X), time(Y), Y = X + 1.

tl(r,TL,L1,T1) :-
    time(T), lane(L1), lane(L2), tln(TL), L1 != L2, next(T1,T),
    tl(g,TL,L1,T), tl(r,TL,L2,T).
tl(g,TL,L1,T1) :-
    time(T), lane(L1), lane(L2), tln(TL), L1 != L2, next(T1,T),
    tl(r,TL,L1,T), tl(g,TL,L2,T).
tl(g,TL,ns,1) :- tln(TL).
tl(r,TL,ew,T) :- tln(TL), time(T), tl(g,TL,ns,T).

go(C,TL,L,T) :-
    time(T), car(C), tln(TL), lane(L), want_go(C,TL,L,T), tl(g,TL,L,T).
wait(C,TL,L,T) :-
    time(T), car(C), tln(TL), lane(L), want_go(C,TL,L,T), tl(r,TL,L,T).
want_go(C,TL,L,T1) :- car(C), tln(TL), lane(L), wait(C,TL,L,T), next(T1,T).

:- time(T), car(C), tln(TL), lane(L), go(C,TL,L,T), tl(r,TL,L,T).
)";

asp::Program traffic_light_program() {
  return asp::parse_program(kTrafficLightSource);
}

shell::ServiceDescriptor traffic_light_descriptor(bool with_activation) {
  shell::ServiceDescriptor d;
  // the standalone program minus its input facts; those arrive as messages
  for (const asp::Rule& r : traffic_light_program().rules) {
    if (r.is_fact()) {
      const std::string& p = r.head->predicate;
      if (p == "active" || p == "car" || p == "want_go") continue;
    }
    d.program.rules.push_back(r);
  }
  if (with_activation) d.activation = asp::parse_ground_atom("active(t1)");
  d.inputs = {{"car", 1}, {"want_go", 4}, {"fault_tl", 3}};
  d.outputs = {{"go", 4}, {"wait", 4}};
  d.queries = {
      {asp::QueryMode::KNOWN, asp::parse_ground_atom("go(c3,t1,ew,2)")},
      {asp::QueryMode::BRAVE, asp::parse_ground_atom("wait(c4,t1,ns,4)")},
  };
  d.retention.kind = shell::RetentionMode::STATEFUL;
  d.retention.retain = {"car", "want_go", "fault_tl"};
  return d;
}

namespace {

const std::vector<std::string> kCars = {"c1", "c2", "c3", "c4", "c5"};
const std::vector<std::string> kModePrefixes = {"brave_", "some_not_", "m_",
                                                "k_", "not_"};

bool mode_tagged_atom(const asp::Atom& a) {
  for (const std::string& p : kModePrefixes) {
    if (a.predicate.rfind(p, 0) == 0) return true;
  }
  return false;
}

mcs::BridgeRule car_bridge(const std::string& head, const std::string& body) {
  mcs::BridgeLit lit;
  lit.ref = mcs::ContextRef{{}, mcs::Designator{"anycar", "C"}};
  lit.atom = asp::parse_atom(body);
  return mcs::BridgeRule{"a_traffic_light(T)",
                         mcs::BridgeHead{"add", asp::parse_atom(head)},
                         {std::move(lit)}};
}

}  // namespace

ScenarioReport run_traffic_light_scenario(const ScenarioOptions& options) {
  ScenarioReport report;
  report.transport =
      options.transport == ScenarioOptions::Transport::SIM ? "sim" : "tcp";
  report.horizon = options.horizon;
  report.seed = options.seed;

  std::unique_ptr<msg::Broker> broker;
  std::unique_ptr<msg::Transport> transport;
  if (options.transport == ScenarioOptions::Transport::SIM) {
    transport = std::make_unique<msg::SimTransport>(std::make_shared<msg::Bus>());
  } else {
    broker = std::make_unique<msg::Broker>();
    broker->start(0);
    transport = std::make_unique<msg::TcpTransport>("127.0.0.1", broker->port());
  }

  mcs::System M;
  for (const std::string& car : kCars) {
    transport->register_component(car, {"anycar"});
    M.contexts.push_back(std::make_unique<mcs::FactStoreContext>(
        car, std::vector<std::string>{"anycar"}));
  }
  M.contexts.push_back(std::make_unique<mcs::AgentContext>(
      "t1", std::vector<std::string>{"a_traffic_light"},
      traffic_light_descriptor(!options.omit_activation), *transport));
  M.rules = {
      car_bridge("car(C)", "car(C)"),
      car_bridge("want_go(C,T,ns,2)", "want_go(C,T,ns,2)"),
      car_bridge("want_go(C,T,ew,2)", "want_go(C,T,ew,2)"),
      car_bridge("want_go(C,T,ns,4)", "want_go(C,T,ns,4)"),
      car_bridge("want_go(C,T,ew,4)", "want_go(C,T,ew,4)"),
  };

  mcs::Schedule schedule;
  auto request = [&schedule](int t, const std::string& car,
                             const std::string& want) {
    schedule[t].push_back(
        {car, {"add", asp::parse_ground_atom("car(" + car + ")")}});
    schedule[t].push_back({car, {"add", asp::parse_ground_atom(want)}});
  };
  request(2, "c1", "want_go(c1,t1,ns,2)");
  request(2, "c2", "want_go(c2,t1,ns,2)");
  request(2, "c3", "want_go(c3,t1,ew,2)");
  request(4, "c4", "want_go(c4,t1,ns,4)");
  request(4, "c5", "want_go(c5,t1,ew,4)");
  if (options.inject_fault) {
    schedule[3].push_back(
        {"t1", {"add", asp::parse_ground_atom("fault_tl(t1,ns,3)")}});
  }

  auto* light = dynamic_cast<mcs::AgentContext*>(M.find("t1"));
  std::vector<std::string> last_consistent_outputs;
  for (int t = 0; t <= options.horizon; ++t) {
    if (auto it = schedule.find(t); it != schedule.end()) {
      for (const mcs::Update& u : it->second) {
        M.find(u.context)->update(u.change);
      }
    }
    mcs::Equilibrium eq = mcs::compute_equilibrium(M, mcs::initial_state(M));

    TickRecord rec;
    rec.time = t;
    rec.equilibrium_steps = eq.steps;
    rec.consistent = eq.state.failed.count("t1") == 0;
    const asp::AnswerSet& s = eq.state.sets.at("t1");
    rec.light_set_size = s.size();
    for (const asp::Atom& a : s.atoms) {
      if (a.predicate == "go" || a.predicate == "wait") {
        rec.outputs.push_back(asp::to_string(a));
      } else if (mode_tagged_atom(a)) {
        rec.query_results.push_back(asp::to_string(a));
      }
    }
    rec.failed.assign(eq.state.failed.begin(), eq.state.failed.end());
    if (!rec.consistent) report.any_failure = true;
    if (rec.consistent) last_consistent_outputs = rec.outputs;

    if (rec.consistent && light->last()) {
      for (const asp::AnswerSet& a : light->last()->answer_sets) {
        for (const asp::Atom& atom : a.atoms) {
          if (atom.predicate != "go" || atom.args.size() != 4) continue;
          asp::Atom red{"tl",
                        {asp::Term::constant("r"), atom.args[1], atom.args[2],
                         atom.args[3]}};
          if (a.contains(red)) report.safety_ok = false;
        }
      }
    }

    for (const std::string& car : kCars) {
      for (const msg::Message& m : transport->drain(car)) {
        report.transcript.push_back("t=" + std::to_string(t) + " " + car +
                                    " <- " + msg::to_string(m));
      }
    }
    report.ticks.push_back(std::move(rec));
  }
  report.schedule = std::move(last_consistent_outputs);
  return report;
}

std::string to_table(const ScenarioReport& report) {
  std::ostringstream out;
  out << "traffic-light scenario  transport=" << report.transport
      << "  horizon=" << report.horizon << "  seed=" << report.seed << "\n";
  out << "  t  steps  ok   |S|  outputs\n";
  for (const TickRecord& rec : report.ticks) {
    out << "  " << rec.time << "  " << rec.equilibrium_steps << "      "
        << (rec.consistent ? "yes" : "NO ") << "  " << rec.light_set_size
        << "   ";
    if (rec.outputs.empty()) {
      out << "-";
    } else {
      for (std::size_t i = 0; i < rec.outputs.size(); ++i) {
        if (i) out << " ";
        out << rec.outputs[i];
      }
    }
    if (!rec.query_results.empty()) {
      out << "   [";
      for (std::size_t i = 0; i < rec.query_results.size(); ++i) {
        if (i) out << " ";
        out << rec.query_results[i];
      }
      out << "]";
    }
    out << "\n";
  }
  out << "schedule:";
  for (const std::string& s : report.schedule) out << " " << s;
  out << "\n";
  out << "safety: " << (report.safety_ok ? "ok" : "VIOLATED") << "\n";
  out << "failures: " << (report.any_failure ? "yes" : "none") << "\n";
  out << "transcript: " << report.transcript.size() << " messages\n";
  return out.str();
}

std::string to_json(const ScenarioReport& report) {
  nlohmann::json j;
  j["transport"] = report.transport;
  j["horizon"] = report.horizon;
  j["seed"] = report.seed;
  j["safety_ok"] = report.safety_ok;
  j["any_failure"] = report.any_failure;
  j["schedule"] = report.schedule;
  j["transcript"] = report.transcript;
  j["ticks"] = nlohmann::json::array();
  for (const TickRecord& rec : report.ticks) {
    nlohmann::json tick;
    tick["time"] = rec.time;
    tick["consistent"] = rec.consistent;
    tick["equilibrium_steps"] = rec.equilibrium_steps;
    tick["light_set_size"] = rec.light_set_size;
    tick["outputs"] = rec.outputs;
    tick["query_results"] = rec.query_results;
    tick["failed"] = rec.failed;
    j["ticks"].push_back(std::move(tick));
  }
  return j.dump(2);
}

}  // namespace muasp::scenario
