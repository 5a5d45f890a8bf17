#include "muasp/msg/transport.hpp"

#include <algorithm>

namespace muasp::msg {

bool valid_component_name(const std::string& name) {
  if (name.empty() || name[0] < 'a' || name[0] > 'z') return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

void Registry::add(const RegistryEntry& entry) {
  if (!valid_component_name(entry.name))
    throw error("registry: invalid component name: " + entry.name);
  if (entry.name == kTransportName)
    throw error("registry: reserved name: " + entry.name);
  for (const std::string& r : entry.roles) {
    if (!valid_component_name(r))
      throw error("registry: invalid role: " + r);
  }
  for (const auto& e : entries_) {
    if (e.name == entry.name)
      throw error("registry: name already registered: " + entry.name);
  }
  entries_.push_back(entry);
}

bool Registry::knows(const std::string& name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const RegistryEntry& e) { return e.name == name; });
}

std::vector<std::string> Registry::lookup(const std::string& role) const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (std::find(e.roles.begin(), e.roles.end(), role) != e.roles.end())
      out.push_back(e.name);
  }
  return out;
}

std::vector<RegistryEntry> Registry::entries() const { return entries_; }

Message make_bounce(const Message& original, std::uint64_t seq) {
  Message f;
  f.performative = Performative::FAILURE;
  f.sender = kTransportName;
  f.receiver = original.sender;
  f.id = "bounce#" + std::to_string(seq);
  f.in_reply_to = original.id;
  f.content = Text{"no such receiver: " + original.receiver};
  return f;
}

void Bus::register_component(const std::string& name,
                             const std::vector<std::string>& roles,
                             const std::string& address) {
  std::lock_guard lock(mu_);
  registry_.add({name, roles, address});
  queues_.try_emplace(name);
}

std::vector<std::string> Bus::lookup(const std::string& role) const {
  std::lock_guard lock(mu_);
  return registry_.lookup(role);
}

bool Bus::knows(const std::string& name) const {
  std::lock_guard lock(mu_);
  return registry_.knows(name);
}

void Bus::enqueue(const std::string& receiver, const Message& m) {
  queues_[receiver].push_back(m);
  ++routed_;
}

void Bus::send(const Message& m) {
  // Round-trip through the codec so sim and wire transports accept exactly
  // the same messages.
  Message delivered = decode(encode(m));
  std::lock_guard lock(mu_);
  if (!registry_.knows(m.receiver)) {
    if (registry_.knows(m.sender))
      enqueue(m.sender, make_bounce(m, bounce_seq_++));
    return;
  }
  enqueue(m.receiver, delivered);
}

std::vector<Message> Bus::drain(const std::string& name) {
  std::lock_guard lock(mu_);
  auto it = queues_.find(name);
  if (it == queues_.end()) return {};
  std::vector<Message> out(it->second.begin(), it->second.end());
  it->second.clear();
  return out;
}

std::uint64_t Bus::routed_count() const {
  std::lock_guard lock(mu_);
  return routed_;
}

SimTransport::SimTransport(std::shared_ptr<Bus> bus) : bus_(std::move(bus)) {
  if (!bus_) throw error("SimTransport needs a bus");
}

void SimTransport::register_component(const std::string& name,
                                      const std::vector<std::string>& roles) {
  bus_->register_component(name, roles, "local");
}

std::vector<std::string> SimTransport::lookup(const std::string& role) {
  return bus_->lookup(role);
}

void SimTransport::send(const Message& m) { bus_->send(m); }

std::vector<Message> SimTransport::drain(const std::string& name) {
  return bus_->drain(name);
}

}  // namespace muasp::msg
