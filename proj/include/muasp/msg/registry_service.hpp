#pragma once

#include <cstdint>
#include <memory>

#include "muasp/msg/transport.hpp"

namespace muasp::msg {

// The registry exposed as an ordinary component named "registry". It answers
//   REQUEST  register(name, role...)  with CONFIRM "registered" or FAILURE
//   QUERY_IF lookup(role)             with CONFIRM listing names
// Replies land in the requester's queue like any other message.
class RegistryService {
 public:
  explicit RegistryService(std::shared_ptr<Bus> bus);

  // Answers every queued registry request. Returns how many were handled.
  std::size_t handle_pending();

  // Builds the reply to a single request, applying its effect to the bus
  // registry. seq numbers the reply ids.
  static Message reply_to(const Message& request, Bus& bus, std::uint64_t& seq);

  static constexpr const char* kName = "registry";

 private:
  std::shared_ptr<Bus> bus_;
  std::uint64_t seq_ = 0;
};

}  // namespace muasp::msg
