#pragma once

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "muasp/msg/message.hpp"

namespace muasp::msg {

struct RegistryEntry {
  std::string name;
  std::vector<std::string> roles;
  std::string address;

  bool operator==(const RegistryEntry&) const = default;
};

// Name directory. Names are unique; lookup by role returns names in
// registration order.
class Registry {
 public:
  // Throws muasp::error when the name is already taken or empty.
  void add(const RegistryEntry& entry);

  bool knows(const std::string& name) const;
  std::vector<std::string> lookup(const std::string& role) const;
  std::vector<RegistryEntry> entries() const;

 private:
  std::vector<RegistryEntry> entries_;
};

// Synthetic sender used for bounced failure notices. The name is reserved;
// no component can register it.
inline constexpr const char* kTransportName = "transport";

// Component names and roles must survive a trip through atom syntax, so they
// are lowercase identifiers: [a-z][A-Za-z0-9_]*.
bool valid_component_name(const std::string& name);

// A messaging endpoint. One transport serves every component registered
// through it; send never blocks on the receiver, delivery happens when the
// receiver drains its queue.
class Transport {
 public:
  virtual ~Transport() = default;

  // Throws muasp::error on a duplicate name.
  virtual void register_component(const std::string& name,
                                  const std::vector<std::string>& roles) = 0;

  // Names holding the role, in registration order.
  virtual std::vector<std::string> lookup(const std::string& role) = 0;

  // Queues the message for its receiver. A message to an unregistered
  // receiver is not delivered; a FAILURE notice from the transport lands in
  // the sender's own queue instead. Throws muasp::error only on messages that
  // cannot be encoded at all.
  virtual void send(const Message& m) = 0;

  // Removes and returns every message queued for the named component, oldest
  // first. Messages from the same sender always appear in the order sent.
  virtual std::vector<Message> drain(const std::string& name) = 0;
};

// Shared in-process message board: one registry plus one queue per receiver.
// Thread-safe; every operation is atomic, so a single-threaded driver sees
// fully deterministic behavior.
class Bus {
 public:
  void register_component(const std::string& name,
                          const std::vector<std::string>& roles,
                          const std::string& address);
  std::vector<std::string> lookup(const std::string& role) const;
  bool knows(const std::string& name) const;
  void send(const Message& m);
  std::vector<Message> drain(const std::string& name);

  // Total number of messages routed or bounced since construction.
  std::uint64_t routed_count() const;

 private:
  void enqueue(const std::string& receiver, const Message& m);

  mutable std::mutex mu_;
  Registry registry_;
  std::map<std::string, std::deque<Message>> queues_;
  std::uint64_t routed_ = 0;
  std::uint64_t bounce_seq_ = 0;
};

// In-process reference transport: a thin view onto a shared Bus.
class SimTransport : public Transport {
 public:
  explicit SimTransport(std::shared_ptr<Bus> bus);

  void register_component(const std::string& name,
                          const std::vector<std::string>& roles) override;
  std::vector<std::string> lookup(const std::string& role) override;
  void send(const Message& m) override;
  std::vector<Message> drain(const std::string& name) override;

  Bus& bus() { return *bus_; }

 private:
  std::shared_ptr<Bus> bus_;
};

// Builds the failure notice a transport bounces back to the sender of an
// undeliverable message.
Message make_bounce(const Message& original, std::uint64_t seq);

}  // namespace muasp::msg
