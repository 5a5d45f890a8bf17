#include "muasp/mcs/agent_context.hpp"

namespace muasp::mcs {

AgentContext::AgentContext(std::string name, std::vector<std::string> roles,
                           shell::ServiceDescriptor descriptor,
                           msg::Transport& transport,
                           std::string sensor_source,
                           shell::SelectionPolicy policy)
    : Context(name, roles),
      agent_(name, std::move(descriptor), transport, roles, std::move(policy)),
      transport_(transport),
      sensor_source_(std::move(sensor_source)) {
  agent_.activate();
}

asp::AnswerSet AgentContext::acc() {
  std::optional<shell::TickResult> res = agent_.step();
  if (!res) throw error("context " + name() + ": service not active");
  last_ = std::move(res);
  if (!last_->consistent) {
    throw error("context " + name() + ": service inconsistent");
  }
  asp::AnswerSet s = *last_->selected;
  for (const asp::QueryResult& qr : last_->query_results) {
    if (qr.value) s.atoms.insert(mode_tagged(qr));
  }
  return s;
}

void AgentContext::apply(const BridgeHead& head, const std::string& source) {
  if (head.op != "add") {
    throw error("messaging context supports add only, got " + head.op);
  }
  std::string from = source.empty() ? sensor_source_ : source;
  if (!applied_.insert({head.atom, from}).second) return;
  msg::Message m;
  m.performative = msg::Performative::REQUEST;
  m.sender = from;
  m.receiver = name();
  m.id = from + "->" + name() + "#b" + std::to_string(seq_++);
  m.content = head.atom;
  transport_.send(m);
}

void AgentContext::update(const BridgeHead& change) {
  if (change.op != "add") {
    throw error("messaging context supports add only, got " + change.op);
  }
  msg::Message m;
  m.performative = msg::Performative::INFORM;
  m.sender = sensor_source_;
  m.receiver = name();
  m.id = sensor_source_ + "->" + name() + "#s" + std::to_string(seq_++);
  m.content = change.atom;
  transport_.send(m);
}

}  // namespace muasp::mcs
