#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "muasp/msg/registry_service.hpp"
#include "muasp/msg/transport.hpp"

namespace muasp::msg {

// Message broker: accepts TCP connections carrying the frame protocol and
// routes messages through an internal Bus, so wire semantics match the
// in-process transport by construction. Every inbound frame is answered on
// its own connection; queued messages are pulled with drain requests, never
// pushed, which keeps delivery order independent of network timing.
class Broker {
 public:
  explicit Broker(std::shared_ptr<Bus> bus = nullptr);
  ~Broker();

  Broker(const Broker&) = delete;
  Broker& operator=(const Broker&) = delete;

  // Binds 127.0.0.1:port (0 picks a free port) and starts serving.
  void start(std::uint16_t port);
  void stop();

  std::uint16_t port() const { return port_; }
  Bus& bus() { return *bus_; }

 private:
  void accept_loop();
  void serve(int fd);
  void handle_frame(const Message& m, int fd, std::uint64_t& ack_seq);

  std::shared_ptr<Bus> bus_;
  std::unique_ptr<RegistryService> registry_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::thread accept_thread_;
  std::mutex mu_;
  std::vector<int> conn_fds_;
  std::vector<std::thread> conn_threads_;
  std::uint64_t registry_seq_ = 0;
  bool running_ = false;
};

// Client endpoint speaking the broker protocol. Drop-in replacement for
// SimTransport; one instance can serve any number of local components.
class TcpTransport : public Transport {
 public:
  TcpTransport(const std::string& host, std::uint16_t port);
  ~TcpTransport() override;

  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  void register_component(const std::string& name,
                          const std::vector<std::string>& roles) override;
  std::vector<std::string> lookup(const std::string& role) override;
  void send(const Message& m) override;
  std::vector<Message> drain(const std::string& name) override;

 private:
  // Sends a request and reads frames until the one correlated with it; the
  // frames before the terminator (a drain's queued messages) go to burst.
  Message rpc(Message request, std::vector<Message>* burst);
  Message read_frame();
  std::string next_id();

  int fd_ = -1;
  std::mutex mu_;
  std::vector<std::uint8_t> buf_;
  std::uint64_t seq_ = 0;
};

}  // namespace muasp::msg
