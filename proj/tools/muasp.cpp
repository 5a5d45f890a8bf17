#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "muasp/asp/parser.hpp"
#include "muasp/asp/query.hpp"
#include "muasp/asp/solver.hpp"
#include "muasp/mcs/system_io.hpp"
#include "muasp/msg/tcp.hpp"
#include "muasp/scenario/scenario.hpp"
#include "muasp/shell/descriptor_io.hpp"

namespace {

using namespace muasp;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw muasp::error("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string render_set(const asp::AnswerSet& s) {
  return "{" + asp::to_string(s) + "}";
}

int cmd_solve(const std::string& file, bool first_only,
              const std::string& query_text) {
  asp::Program p = asp::parse_program(slurp(file));
  std::vector<asp::AnswerSet> sets = asp::solve(p);
  if (!query_text.empty()) {
    std::istringstream qs(query_text);
    std::string mode_word, atom_text;
    qs >> mode_word;
    std::getline(qs, atom_text);
    auto mode = asp::query_mode_from(mode_word);
    if (!mode) throw muasp::error("unknown query mode: " + mode_word);
    asp::Atom a = asp::parse_ground_atom(atom_text);
    if (sets.empty()) {
      std::cout << "inconsistent\n";
      return 1;
    }
    bool value = asp::eval_query(*mode, a, sets);
    std::cout << mode_word << " " << asp::to_string(a) << ": "
              << (value ? "true" : "false") << "\n";
    return 0;
  }
  if (sets.empty()) {
    std::cout << "inconsistent\n";
    return 1;
  }
  std::size_t n = first_only ? 1 : sets.size();
  for (std::size_t i = 0; i < n; ++i) std::cout << render_set(sets[i]) << "\n";
  return 0;
}

struct ScriptEntry {
  enum Kind { ACTIVATE, STOP, INPUT } kind = INPUT;
  asp::Atom atom;
};

std::map<int, std::vector<ScriptEntry>> parse_script(const std::string& text) {
  std::map<int, std::vector<ScriptEntry>> script;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    if (auto cut = raw.find('%'); cut != std::string::npos) raw.erase(cut);
    std::string line;
    for (char c : raw) {
      if (!line.empty() || !std::isspace((unsigned char)c)) line += c;
    }
    while (!line.empty() && std::isspace((unsigned char)line.back())) line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string at;
    ls >> at;
    if (at != "at") throw muasp::error("script line must start with 'at': " + line);
    std::string t_text;
    std::getline(ls, t_text, ':');
    int t = 0;
    try {
      t = std::stoi(t_text);
    } catch (const std::exception&) {
      throw muasp::error("bad script time: " + line);
    }
    std::string rest;
    std::getline(ls, rest);
    while (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
    if (rest.empty() || rest.back() != '.') {
      throw muasp::error("script entry must end with '.': " + line);
    }
    rest.pop_back();
    ScriptEntry e;
    if (rest == "activate") {
      e.kind = ScriptEntry::ACTIVATE;
    } else if (rest == "stop") {
      e.kind = ScriptEntry::STOP;
    } else {
      e.kind = ScriptEntry::INPUT;
      e.atom = asp::parse_ground_atom(rest);
    }
    script[t].push_back(std::move(e));
  }
  return script;
}

int cmd_run_service(const std::string& desc_path, const std::string& script_path,
                    int horizon) {
  shell::ServiceDescriptor d = shell::load_descriptor_file(desc_path);
  std::vector<std::string> violations = shell::validate_descriptor(d);
  if (!violations.empty()) {
    for (const std::string& v : violations) std::cerr << "descriptor: " << v << "\n";
    return 2;
  }
  std::map<int, std::vector<ScriptEntry>> script = parse_script(slurp(script_path));
  if (horizon <= 0) {
    horizon = script.empty() ? 0 : script.rbegin()->first;
  }
  shell::ShellState state;
  shell::SelectionPolicy policy;
  bool any_inconsistent = false;
  std::uint64_t msg_seq = 0;
  for (int t = 1; t <= horizon; ++t) {
    std::vector<shell::Arrival> arrivals;
    bool stopped = false;
    if (auto it = script.find(t); it != script.end()) {
      for (const ScriptEntry& e : it->second) {
        if (e.kind == ScriptEntry::ACTIVATE) {
          state = shell::activate(state, d);
          std::cout << "t=" << t << " activated\n";
        } else if (e.kind == ScriptEntry::STOP) {
          state = shell::stop(state, d);
          std::cout << "t=" << t << " stopped\n";
          stopped = true;
        } else {
          arrivals.push_back({e.atom, "script", "script#" + std::to_string(msg_seq++)});
        }
      }
    }
    if (stopped) break;
    if (state.phase != shell::Phase::ACTIVE) {
      std::cout << "t=" << t << " no-operation\n";
      continue;
    }
    shell::TickResult res = shell::tick(state, d, arrivals, policy);
    state = res.state;
    if (!res.consistent) {
      any_inconsistent = true;
      std::cout << "t=" << t << " inconsistent\n";
      for (const shell::IoEntry& e : res.failures) {
        std::cout << "t=" << t << " FAILURE -> " << e.requester << " re "
                  << e.message_id << "\n";
      }
      continue;
    }
    std::cout << "t=" << t << " selected " << res.selected->size() << " atoms\n";
    for (const shell::TickOutput& out : res.outputs) {
      if (out.recipients.empty()) {
        std::cout << "t=" << t << " output " << asp::to_string(out.atom) << "\n";
      }
      for (const shell::IoEntry& e : out.recipients) {
        std::cout << "t=" << t << " CONFIRM " << asp::to_string(out.atom)
                  << " -> " << e.requester << " re " << e.message_id << "\n";
      }
    }
    for (const asp::QueryResult& qr : res.query_results) {
      std::cout << "t=" << t << " query " << asp::to_string(qr.query) << " = "
                << (qr.value ? "true" : "false") << "\n";
    }
  }
  return any_inconsistent ? 1 : 0;
}

int cmd_run_system(const std::string& path, int horizon, bool live) {
  mcs::SystemSpec spec = mcs::load_system_file(path);
  if (horizon > 0) spec.horizon = horizon;
  std::unique_ptr<msg::Broker> broker;
  std::unique_ptr<msg::Transport> transport;
  if (live) {
    broker = std::make_unique<msg::Broker>();
    broker->start(0);
    transport = std::make_unique<msg::TcpTransport>("127.0.0.1", broker->port());
  }
  mcs::System M = mcs::build_system(spec, transport.get());
  try {
    std::vector<mcs::TimedRecord> records =
        mcs::timed_run(M, spec.schedule, spec.horizon);
    for (const mcs::TimedRecord& rec : records) {
      for (const auto& c : M.contexts) {
        const asp::AnswerSet& s = rec.eq.state.sets.at(c->name());
        std::cout << "t=" << rec.time << " " << c->name() << " |S|=" << s.size();
        if (rec.eq.state.failed.count(c->name())) std::cout << " FAILED";
        std::string atoms = asp::to_string(s);
        if (atoms.size() > 120) atoms = atoms.substr(0, 117) + "...";
        std::cout << " {" << atoms << "}\n";
      }
    }
  } catch (const mcs::equilibrium_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_scenario(bool live, int horizon, unsigned seed, bool as_json,
                 bool fault, bool no_activation) {
  scenario::ScenarioOptions opt;
  opt.transport = live ? scenario::ScenarioOptions::Transport::TCP
                       : scenario::ScenarioOptions::Transport::SIM;
  opt.horizon = horizon;
  opt.seed = seed;
  opt.inject_fault = fault;
  opt.omit_activation = no_activation;
  scenario::ScenarioReport report = scenario::run_traffic_light_scenario(opt);
  std::cout << (as_json ? scenario::to_json(report) : scenario::to_table(report));
  if (!as_json) std::cout.flush();
  if (!report.safety_ok) return 1;
  return report.any_failure ? 1 : 0;
}

int cmd_registry_serve(std::uint16_t port) {
  msg::Broker broker;
  broker.start(port);
  std::cout << "registry listening on 127.0.0.1:" << broker.port() << "\n"
            << std::flush;
  for (;;) std::this_thread::sleep_for(std::chrono::seconds(3600));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"miniature answer-set services: solver, shells, systems"};
  app.require_subcommand(1);

  std::string solve_file, query_text;
  bool flag_all = false, flag_first = false;
  CLI::App* solve = app.add_subcommand("solve", "compute answer sets of a program");
  solve->add_option("file", solve_file, "ASP program file")->required();
  solve->add_flag("--all", flag_all, "print every answer set (default)");
  solve->add_flag("--first", flag_first, "print only the first answer set");
  solve->add_option("--query", query_text, "evaluate 'mode atom' over all answer sets");

  std::string rs_desc, rs_script;
  int rs_horizon = 0;
  CLI::App* runsvc = app.add_subcommand("run-service", "replay a timed script through a service shell");
  runsvc->add_option("descriptor", rs_desc, "service descriptor file")->required();
  runsvc->add_option("--script", rs_script, "timed arrival script")->required();
  runsvc->add_option("--horizon", rs_horizon, "ticks to run (default: last script time)");

  std::string sys_path;
  int sys_horizon = 0;
  bool sys_live = false;
  CLI::App* runsys = app.add_subcommand("run-system", "run a multi-context system to timed equilibria");
  runsys->add_option("system", sys_path, "system description file")->required();
  runsys->add_option("--horizon", sys_horizon, "override the declared horizon");
  runsys->add_flag("--live", sys_live, "route messages over a local TCP broker");

  std::string which;
  bool sc_live = false, sc_json = false, sc_fault = false, sc_noact = false;
  int sc_horizon = 5;
  unsigned sc_seed = 0;
  CLI::App* scenario_cmd = app.add_subcommand("scenario", "run a packaged scenario");
  scenario_cmd->add_option("name", which, "scenario name (traffic-light)")->required();
  scenario_cmd->add_flag("--live", sc_live, "route messages over a local TCP broker");
  scenario_cmd->add_flag("--json", sc_json, "machine-readable report");
  scenario_cmd->add_flag("--fault", sc_fault, "inject fault_tl(t1,ns,3) at t=3");
  scenario_cmd->add_flag("--no-activation", sc_noact, "drop the activation fact");
  scenario_cmd->add_option("--horizon", sc_horizon, "ticks to run");
  scenario_cmd->add_option("--seed", sc_seed, "recorded in the report");

  std::uint16_t port = 0;
  CLI::App* registry = app.add_subcommand("registry", "name registry over TCP");
  CLI::App* serve = registry->add_subcommand("serve", "run the broker until interrupted");
  serve->add_option("--port", port, "listen port (0 picks one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) {
      if (flag_all && flag_first) throw muasp::error("--all and --first conflict");
      return cmd_solve(solve_file, flag_first, query_text);
    }
    if (runsvc->parsed()) return cmd_run_service(rs_desc, rs_script, rs_horizon);
    if (runsys->parsed()) return cmd_run_system(sys_path, sys_horizon, sys_live);
    if (scenario_cmd->parsed()) {
      if (which != "traffic-light") {
        throw muasp::error("unknown scenario: " + which);
      }
      return cmd_scenario(sc_live, sc_horizon, sc_seed, sc_json, sc_fault, sc_noact);
    }
    if (registry->parsed()) {
      if (!serve->parsed()) throw muasp::error("registry needs the serve subcommand");
      return cmd_registry_serve(port);
    }
  } catch (const muasp::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
