#include "muasp/msg/tcp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace muasp::msg {

namespace {

void send_all(int fd, const std::uint8_t* data, std::size_t size) {
  std::size_t off = 0;
  while (off < size) {
    ssize_t n = ::send(fd, data + off, size - off, MSG_NOSIGNAL);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      throw error("tcp: connection write failed");
    }
    off += static_cast<std::size_t>(n);
  }
}

void send_frame(int fd, const Message& m) {
  auto frame = encode(m);
  send_all(fd, frame.data(), frame.size());
}

asp::Term constant(const std::string& name) {
  asp::Term t;
  t.kind = asp::TermKind::Constant;
  t.name = name;
  return t;
}

asp::Atom control_atom(const std::string& predicate,
                       const std::vector<std::string>& args) {
  asp::Atom a;
  a.predicate = predicate;
  for (const auto& s : args) a.args.push_back(constant(s));
  return a;
}

}  // namespace

Broker::Broker(std::shared_ptr<Bus> bus) : bus_(std::move(bus)) {
  if (!bus_) bus_ = std::make_shared<Bus>();
  registry_ = std::make_unique<RegistryService>(bus_);
}

Broker::~Broker() { stop(); }

void Broker::start(std::uint16_t port) {
  if (running_) throw error("broker already running");
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw error("tcp: socket() failed");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw error("tcp: bind failed on port " + std::to_string(port));
  }
  if (::listen(listen_fd_, 16) < 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw error("tcp: listen failed");
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);

  running_ = true;
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void Broker::stop() {
  if (!running_) return;
  running_ = false;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  listen_fd_ = -1;
  {
    std::lock_guard lock(mu_);
    for (int fd : conn_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::thread> threads;
  {
    std::lock_guard lock(mu_);
    threads.swap(conn_threads_);
    for (int fd : conn_fds_) ::close(fd);
    conn_fds_.clear();
  }
  for (auto& t : threads)
    if (t.joinable()) t.join();
}

void Broker::accept_loop() {
  while (running_) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      break;  // listener closed
    }
    std::lock_guard lock(mu_);
    if (!running_) {
      ::close(fd);
      break;
    }
    conn_fds_.push_back(fd);
    conn_threads_.emplace_back([this, fd] { serve(fd); });
  }
}

void Broker::serve(int fd) {
  std::vector<std::uint8_t> buf;
  std::uint8_t chunk[4096];
  std::uint64_t ack_seq = 0;
  while (true) {
    ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      break;
    }
    buf.insert(buf.end(), chunk, chunk + n);
    try {
      while (auto got = try_decode(buf.data(), buf.size())) {
        buf.erase(buf.begin(), buf.begin() + static_cast<long>(got->second));
        handle_frame(got->first, fd, ack_seq);
      }
    } catch (const error&) {
      break;  // malformed frame: drop the connection
    }
  }
  ::shutdown(fd, SHUT_RDWR);
}

void Broker::handle_frame(const Message& m, int fd, std::uint64_t& ack_seq) {
  auto reply = [&](Performative p, const std::string& text) {
    Message r;
    r.performative = p;
    r.sender = kTransportName;
    r.receiver = m.sender;
    r.id = "ack#" + std::to_string(ack_seq++);
    r.in_reply_to = m.id;
    r.content = Text{text};
    send_frame(fd, r);
  };

  if (m.receiver == kTransportName) {
    const auto* atom = std::get_if<asp::Atom>(&m.content);
    if (atom && atom->predicate == "register" && !atom->args.empty()) {
      std::vector<std::string> roles;
      for (std::size_t i = 1; i < atom->args.size(); ++i)
        roles.push_back(atom->args[i].name);
      try {
        bus_->register_component(atom->args.front().name, roles, "tcp");
      } catch (const error& e) {
        reply(Performative::FAILURE, e.what());
        return;
      }
      reply(Performative::CONFIRM, "registered");
      return;
    }
    if (atom && atom->predicate == "lookup" && atom->args.size() == 1) {
      std::string joined;
      for (const std::string& n : bus_->lookup(atom->args.front().name)) {
        if (!joined.empty()) joined += " ";
        joined += n;
      }
      reply(Performative::CONFIRM, joined);
      return;
    }
    if (atom && atom->predicate == "drain" && atom->args.size() == 1) {
      for (const Message& queued : bus_->drain(atom->args.front().name))
        send_frame(fd, queued);
      reply(Performative::CONFIRM, "drained");
      return;
    }
    // Anything else addressed to the transport bounces like an unknown name;
    // the registry never hands out the reserved name, so the bus cannot
    // deliver it.
    bus_->send(m);
    reply(Performative::CONFIRM, "bounced");
    return;
  }

  if (m.receiver == RegistryService::kName) {
    // Answer inline so a broker needs no registry pump of its own.
    Message registry_reply = [&] {
      std::lock_guard lock(mu_);
      return RegistryService::reply_to(m, *bus_, registry_seq_);
    }();
    if (m.performative != Performative::CONFIRM &&
        m.performative != Performative::FAILURE)
      bus_->send(registry_reply);
    reply(Performative::CONFIRM, "routed");
    return;
  }

  bus_->send(m);
  reply(Performative::CONFIRM, "routed");
}

TcpTransport::TcpTransport(const std::string& host, std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw error("tcp: socket() failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd_);
    fd_ = -1;
    throw error("tcp: bad host address: " + host);
  }
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    ::close(fd_);
    fd_ = -1;
    throw error("tcp: cannot connect to " + host + ":" + std::to_string(port));
  }
}

TcpTransport::~TcpTransport() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
  }
}

std::string TcpTransport::next_id() { return "t#" + std::to_string(seq_++); }

Message TcpTransport::read_frame() {
  std::uint8_t chunk[4096];
  while (true) {
    if (auto got = try_decode(buf_.data(), buf_.size())) {
      buf_.erase(buf_.begin(), buf_.begin() + static_cast<long>(got->second));
      return got->first;
    }
    ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      throw error("tcp: connection closed by broker");
    }
    buf_.insert(buf_.end(), chunk, chunk + n);
  }
}

Message TcpTransport::rpc(Message request, std::vector<Message>* burst) {
  std::lock_guard lock(mu_);
  request.id = next_id();
  send_frame(fd_, request);
  while (true) {
    Message m = read_frame();
    if (m.in_reply_to == request.id && m.sender == kTransportName) return m;
    if (burst) burst->push_back(std::move(m));
  }
}

void TcpTransport::register_component(const std::string& name,
                                      const std::vector<std::string>& roles) {
  if (!valid_component_name(name))
    throw error("registry: invalid component name: " + name);
  for (const auto& r : roles)
    if (!valid_component_name(r)) throw error("registry: invalid role: " + r);

  std::vector<std::string> args{name};
  args.insert(args.end(), roles.begin(), roles.end());
  Message req;
  req.performative = Performative::REQUEST;
  req.sender = name;
  req.receiver = kTransportName;
  req.content = control_atom("register", args);
  Message reply = rpc(std::move(req), nullptr);
  if (reply.performative == Performative::FAILURE)
    throw error(to_string(reply.content));
}

std::vector<std::string> TcpTransport::lookup(const std::string& role) {
  if (!valid_component_name(role)) throw error("registry: invalid role: " + role);
  Message req;
  req.performative = Performative::QUERY_IF;
  req.sender = "client";
  req.receiver = kTransportName;
  req.content = control_atom("lookup", {role});
  Message reply = rpc(std::move(req), nullptr);
  std::vector<std::string> names;
  std::string joined = to_string(reply.content);
  std::size_t pos = 0;
  while (pos < joined.size()) {
    std::size_t space = joined.find(' ', pos);
    if (space == std::string::npos) space = joined.size();
    if (space > pos) names.push_back(joined.substr(pos, space - pos));
    pos = space + 1;
  }
  return names;
}

void TcpTransport::send(const Message& m) {
  Message copy = m;
  // Same validation as the in-process path.
  decode(encode(copy));
  std::lock_guard lock(mu_);
  send_frame(fd_, copy);
  while (true) {
    Message reply = read_frame();
    if (reply.in_reply_to == copy.id && reply.sender == kTransportName &&
        (to_string(reply.content) == "routed" ||
         to_string(reply.content) == "bounced"))
      return;
    // Frames for other requests cannot appear here: operations on this
    // connection are serialized and the broker only answers what it was sent.
    throw error("tcp: unexpected frame while awaiting send ack");
  }
}

std::vector<Message> TcpTransport::drain(const std::string& name) {
  Message req;
  req.performative = Performative::REQUEST;
  req.sender = name;
  req.receiver = kTransportName;
  req.content = control_atom("drain", {name});
  std::vector<Message> burst;
  rpc(std::move(req), &burst);
  return burst;
}

}  // namespace muasp::msg
