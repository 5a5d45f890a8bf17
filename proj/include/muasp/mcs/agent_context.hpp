#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "muasp/agent/agent.hpp"
#include "muasp/mcs/mcs.hpp"

namespace muasp::mcs {

// MCS context whose knowledge base lives behind a mailbox: bridge heads are
// delivered as REQUEST messages from the source context, scheduled updates as
// INFORM sensor readings from a system component, and acc is one agent step.
// Only the add operation has a wire form. Heads already sent are not sent
// again, which keeps equilibrium iteration from flooding the mailbox; the
// service must therefore retain its inputs (STATEFUL) for acc to be a
// fixpoint.
class AgentContext : public Context {
 public:
  AgentContext(std::string name, std::vector<std::string> roles,
               shell::ServiceDescriptor descriptor, msg::Transport& transport,
               std::string sensor_source = "system",
               shell::SelectionPolicy policy = {});

  asp::AnswerSet acc() override;
  void apply(const BridgeHead& head, const std::string& source) override;
  void update(const BridgeHead& change) override;

  agent::ServiceAgent& agent() { return agent_; }
  // Result of the most recent acc tick, for inspection beyond the data state.
  const std::optional<shell::TickResult>& last() const { return last_; }

 private:
  agent::ServiceAgent agent_;
  msg::Transport& transport_;
  std::string sensor_source_;
  std::set<std::pair<asp::Atom, std::string>> applied_;
  std::optional<shell::TickResult> last_;
  std::uint64_t seq_ = 0;
};

}  // namespace muasp::mcs
