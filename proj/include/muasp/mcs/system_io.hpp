#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "muasp/mcs/mcs.hpp"
#include "muasp/msg/transport.hpp"

namespace muasp::mcs {

// System description document, line oriented:
//
//   horizon 5.
//   context c1 roles anycar            fact-store context; roles optional
//     facts car(c1). want_go(c1,t1,ns,2).
//   context t1 roles a_traffic_light   service context
//     service traffic_light.service
//   bridge DEST: add(atom) <- (REF: atom), (REF: atom).
//   at 2: c1 add car(c1).
//
// DEST and REF are context names or designators role(VAR). The facts lines
// accept fact programs (ranges included); service paths resolve against the
// document's directory. '%' starts a comment.
struct ContextSpec {
  std::string name;
  std::vector<std::string> roles;
  std::optional<std::string> service_path;
  asp::Program facts;  // fact store when service_path is absent

  bool operator==(const ContextSpec&) const = default;
};

struct SystemSpec {
  std::vector<ContextSpec> contexts;
  std::vector<BridgeRule> bridges;
  Schedule schedule;
  int horizon = 0;
  std::string base_dir = ".";
};

SystemSpec parse_system(std::string_view text, const std::string& base_dir = ".");
SystemSpec load_system_file(const std::string& path);

std::string to_text(const SystemSpec& spec);

// Instantiates the declared contexts: fact stores directly, services from
// their descriptor files, message-backed when a transport is given. All
// context names register on the transport so replies are routable.
System build_system(const SystemSpec& spec, msg::Transport* transport = nullptr);

}  // namespace muasp::mcs
