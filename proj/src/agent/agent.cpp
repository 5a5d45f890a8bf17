#include "muasp/agent/agent.hpp"

#include "muasp/asp/query.hpp"

namespace muasp::agent {

using asp::Atom;
using asp::Query;
using asp::QueryResult;
using msg::Message;
using msg::Performative;

ServiceAgent::ServiceAgent(std::string name, shell::ServiceDescriptor descriptor,
                           msg::Transport& transport,
                           std::vector<std::string> roles,
                           shell::SelectionPolicy policy)
    : name_(std::move(name)),
      descriptor_(std::move(descriptor)),
      transport_(transport),
      policy_(std::move(policy)) {
  heads_ = shell::compute_heads(descriptor_.program);
  transport_.register_component(name_, roles);
}

void ServiceAgent::activate() { state_ = shell::activate(state_, descriptor_); }

void ServiceAgent::stop_service() { state_ = shell::stop(state_, descriptor_); }

std::string ServiceAgent::next_id() {
  return name_ + "#" + std::to_string(seq_++);
}

void ServiceAgent::send_failure(const std::string& to,
                                const std::string& reply_to,
                                const std::string& reason) {
  Message f;
  f.performative = Performative::FAILURE;
  f.sender = name_;
  f.receiver = to;
  f.id = next_id();
  f.in_reply_to = reply_to;
  f.content = msg::Text{reason};
  transport_.send(f);
}

std::optional<shell::TickResult> ServiceAgent::step() {
  std::vector<Message> inbox = transport_.drain(name_);
  bool active = state_.phase == shell::Phase::ACTIVE;

  std::vector<shell::Arrival> arrivals;
  struct PendingQuery {
    Query query;
    std::string requester;
    std::string message_id;
  };
  std::vector<PendingQuery> queries;

  for (const Message& m : inbox) {
    switch (m.performative) {
      case Performative::CONFIRM:
      case Performative::FAILURE:
        reply_log_.push_back(m);
        continue;
      case Performative::REQUEST: {
        const auto* atom = std::get_if<Atom>(&m.content);
        if (!atom) {
          send_failure(m.sender, m.id, "request must carry an atom");
          continue;
        }
        if (!descriptor_.inputs.count(shell::schema_of(*atom))) {
          send_failure(m.sender, m.id,
                       "not an input of this service: " + asp::to_string(*atom));
          continue;
        }
        if (!active) {
          send_failure(m.sender, m.id, "service not active");
          continue;
        }
        arrivals.push_back({*atom, m.sender, m.id});
        continue;
      }
      case Performative::INFORM: {
        // Sensor readings: accepted silently while active, dropped otherwise.
        const auto* atom = std::get_if<Atom>(&m.content);
        if (active && atom && descriptor_.inputs.count(shell::schema_of(*atom)))
          arrivals.push_back({*atom, shell::kSensor, m.id});
        else
          reply_log_.push_back(m);
        continue;
      }
      case Performative::QUERY_IF: {
        Query q;
        if (const auto* query = std::get_if<Query>(&m.content)) {
          q = *query;
        } else if (const auto* atom = std::get_if<Atom>(&m.content)) {
          q = Query{asp::QueryMode::KNOWN, *atom};
        } else {
          send_failure(m.sender, m.id, "query_if must carry a query or atom");
          continue;
        }
        if (!active) {
          send_failure(m.sender, m.id, "service not active");
          continue;
        }
        bool known_schema = heads_.count(shell::schema_of(q.atom)) > 0 ||
                            descriptor_.inputs.count(shell::schema_of(q.atom)) > 0;
        if (!known_schema) {
          send_failure(m.sender, m.id,
                       "query outside service vocabulary: " + asp::to_string(q.atom));
          continue;
        }
        queries.push_back({q, m.sender, m.id});
        continue;
      }
    }
  }

  if (!active) return std::nullopt;

  shell::TickResult result = shell::tick(state_, descriptor_, arrivals, policy_);
  state_ = result.state;

  for (const shell::TickOutput& out : result.outputs) {
    for (const shell::IoEntry& e : out.recipients) {
      Message c;
      c.performative = Performative::CONFIRM;
      c.sender = name_;
      c.receiver = e.requester;
      c.id = next_id();
      c.in_reply_to = e.message_id;
      c.content = out.atom;
      transport_.send(c);
    }
  }

  for (const PendingQuery& pq : queries) {
    if (!result.consistent) {
      send_failure(pq.requester, pq.message_id,
                   "no answer sets: program is inconsistent");
      continue;
    }
    bool value;
    try {
      value = asp::eval_query(pq.query.mode, pq.query.atom, result.answer_sets);
    } catch (const error& e) {
      send_failure(pq.requester, pq.message_id, e.what());
      continue;
    }
    Message c;
    c.performative = Performative::CONFIRM;
    c.sender = name_;
    c.receiver = pq.requester;
    c.id = next_id();
    c.in_reply_to = pq.message_id;
    c.content = QueryResult{pq.query, value};
    transport_.send(c);
  }

  for (const shell::IoEntry& e : result.failures)
    send_failure(e.requester, e.message_id, "service inconsistent");

  return result;
}

}  // namespace muasp::agent
