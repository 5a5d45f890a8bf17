#include "muasp/msg/registry_service.hpp"

namespace muasp::msg {

namespace {

Message base_reply(const Message& request, std::uint64_t seq) {
  Message r;
  r.sender = RegistryService::kName;
  r.receiver = request.sender;
  r.id = "registry#" + std::to_string(seq);
  r.in_reply_to = request.id;
  return r;
}

Message failure(const Message& request, std::uint64_t seq,
                const std::string& reason) {
  Message r = base_reply(request, seq);
  r.performative = Performative::FAILURE;
  r.content = Text{reason};
  return r;
}

bool all_constants(const asp::Atom& a) {
  for (const auto& t : a.args)
    if (t.kind != asp::TermKind::Constant) return false;
  return true;
}

}  // namespace

RegistryService::RegistryService(std::shared_ptr<Bus> bus)
    : bus_(std::move(bus)) {
  if (!bus_) throw error("RegistryService needs a bus");
  if (!bus_->knows(kName)) bus_->register_component(kName, {kName}, "builtin");
}

Message RegistryService::reply_to(const Message& request, Bus& bus,
                                  std::uint64_t& seq) {
  const auto* atom = std::get_if<asp::Atom>(&request.content);
  if (!atom || !all_constants(*atom))
    return failure(request, seq++, "unsupported registry request");

  if (request.performative == Performative::REQUEST &&
      atom->predicate == "register" && !atom->args.empty()) {
    std::string name = atom->args.front().name;
    std::vector<std::string> roles;
    for (std::size_t i = 1; i < atom->args.size(); ++i)
      roles.push_back(atom->args[i].name);
    try {
      bus.register_component(name, roles, "message");
    } catch (const error& e) {
      return failure(request, seq++, e.what());
    }
    Message r = base_reply(request, seq++);
    r.performative = Performative::CONFIRM;
    r.content = Text{"registered"};
    return r;
  }

  if (request.performative == Performative::QUERY_IF &&
      atom->predicate == "lookup" && atom->args.size() == 1) {
    std::string joined;
    for (const std::string& n : bus.lookup(atom->args.front().name)) {
      if (!joined.empty()) joined += " ";
      joined += n;
    }
    Message r = base_reply(request, seq++);
    r.performative = Performative::CONFIRM;
    r.content = Text{joined};
    return r;
  }

  return failure(request, seq++, "unsupported registry request");
}

std::size_t RegistryService::handle_pending() {
  std::size_t handled = 0;
  for (const Message& m : bus_->drain(kName)) {
    // Never answer answers, or a bounced reply would echo forever.
    if (m.performative == Performative::CONFIRM ||
        m.performative == Performative::FAILURE)
      continue;
    bus_->send(reply_to(m, *bus_, seq_));
    ++handled;
  }
  return handled;
}

}  // namespace muasp::msg
