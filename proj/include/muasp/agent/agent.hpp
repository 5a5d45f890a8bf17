#pragma once

#include <optional>
#include <string>
#include <vector>

#include "muasp/msg/transport.hpp"
#include "muasp/shell/shell.hpp"

namespace muasp::agent {

// A shelled service bound to a mailbox. Each step drains the mailbox, maps
// performatives onto the service lifecycle, runs one tick while active, and
// replies:
//   REQUEST  carrying an input atom   joins the tick, outputs come back as
//                                     CONFIRMs correlated to the request
//   INFORM   carrying an input atom   joins the tick as a sensor reading,
//                                     never answered
//   QUERY_IF carrying a query         answered from the same tick's answer
//                                     sets with a CONFIRM; a bare atom is
//                                     read as mode K
//   anything else                     refused with a FAILURE
// An inconsistent tick sends FAILURE notices to every pending requester.
class ServiceAgent {
 public:
  ServiceAgent(std::string name, shell::ServiceDescriptor descriptor,
               msg::Transport& transport,
               std::vector<std::string> roles = {},
               shell::SelectionPolicy policy = {});

  const std::string& name() const { return name_; }
  const shell::ServiceDescriptor& descriptor() const { return descriptor_; }
  const shell::ShellState& state() const { return state_; }
  shell::Phase phase() const { return state_.phase; }

  void activate();
  void stop_service();

  // One mailbox/tick cycle. Returns the tick result when a tick ran (the
  // agent was active), nullopt otherwise.
  std::optional<shell::TickResult> step();

  // Replies received for this agent's own outputs, oldest first.
  const std::vector<msg::Message>& reply_log() const { return reply_log_; }

 private:
  std::string next_id();
  void send_failure(const std::string& to, const std::string& reply_to,
                    const std::string& reason);

  std::string name_;
  shell::ServiceDescriptor descriptor_;
  msg::Transport& transport_;
  shell::SelectionPolicy policy_;
  shell::ShellState state_;
  std::set<shell::Schema> heads_;
  std::vector<msg::Message> reply_log_;
  std::uint64_t seq_ = 0;
};

}  // namespace muasp::agent
