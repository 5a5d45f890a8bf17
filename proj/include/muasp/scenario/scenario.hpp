#pragma once

#include <string>
#include <vector>

#include "muasp/mcs/mcs.hpp"
#include "muasp/shell/shell.hpp"

namespace muasp::scenario {

// The virtual traffic light, standalone: identifiers, activation and fault
// checks, the five cars with their requests, lanes, the five-instant
// lookahead, color transitions, and the go/wait protocol.
extern const char* kTrafficLightSource;

asp::Program traffic_light_program();

// The same program stripped of the request facts and with the lifecycle
// moved to the shell: activation atom active(t1), inputs car/1 want_go/4
// fault_tl/3, outputs go/4 wait/4, requests retained across ticks.
shell::ServiceDescriptor traffic_light_descriptor(bool with_activation = true);

struct ScenarioOptions {
  enum class Transport { SIM, TCP } transport = Transport::SIM;
  bool inject_fault = false;     // sensor reports fault_tl(t1,ns,3) at t=3
  bool omit_activation = false;  // descriptor without an activation atom
  int horizon = 5;
  unsigned seed = 0;  // recorded; the run itself is deterministic
};

struct TickRecord {
  int time = 0;
  bool consistent = true;
  int equilibrium_steps = 0;
  std::size_t light_set_size = 0;
  std::vector<std::string> outputs;        // go/wait atoms in the light's set
  std::vector<std::string> query_results;  // mode-tagged atoms in the set
  std::vector<std::string> failed;         // failed context names
};

struct ScenarioReport {
  std::vector<TickRecord> ticks;
  std::vector<std::string> schedule;  // final go/wait atoms, canonical order
  bool safety_ok = true;   // no answer set pairs a go with a red light
  bool any_failure = false;
  std::string transport;
  int horizon = 0;
  unsigned seed = 0;
  std::vector<std::string> transcript;  // car-mailbox traffic, drain order
};

// Five scripted car contexts feed one traffic-light service over the
// messaging layer; requests enter the car stores at t=2 and t=4 and reach
// the light through designator bridge rules.
ScenarioReport run_traffic_light_scenario(const ScenarioOptions& options = {});

std::string to_table(const ScenarioReport& report);
std::string to_json(const ScenarioReport& report);

}  // namespace muasp::scenario
