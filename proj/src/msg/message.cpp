#include "muasp/msg/message.hpp"

#include "json.hpp"

#include "muasp/asp/parser.hpp"

namespace muasp::msg {

using nlohmann::json;

std::string to_string(Performative p) {
  switch (p) {
    case Performative::REQUEST:
      return "REQUEST";
    case Performative::CONFIRM:
      return "CONFIRM";
    case Performative::QUERY_IF:
      return "QUERY_IF";
    case Performative::FAILURE:
      return "FAILURE";
    case Performative::INFORM:
      return "INFORM";
  }
  throw error("unknown performative");
}

Performative performative_from(const std::string& name) {
  if (name == "REQUEST") return Performative::REQUEST;
  if (name == "CONFIRM") return Performative::CONFIRM;
  if (name == "QUERY_IF") return Performative::QUERY_IF;
  if (name == "FAILURE") return Performative::FAILURE;
  if (name == "INFORM") return Performative::INFORM;
  throw error("unknown performative: " + name);
}

std::string to_string(const Content& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Text>) {
          return v.value;
        } else {
          return asp::to_string(v);
        }
      },
      c);
}

std::string to_string(const Message& m) {
  std::string out = to_string(m.performative);
  out += " " + m.sender + " -> " + m.receiver + " [" + m.id;
  if (m.in_reply_to) out += " re " + *m.in_reply_to;
  out += "] " + to_string(m.content);
  return out;
}

codec_error::codec_error(std::size_t offset, const std::string& what)
    : error("codec error at byte " + std::to_string(offset) + ": " + what),
      offset_(offset) {}

namespace {

// Atoms travel as plain strings in surface syntax. Queries and query results
// travel as objects so a failure reason can never be mistaken for one.
json content_to_json(const Content& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, asp::Atom>) {
          return asp::to_string(v);
        } else if constexpr (std::is_same_v<T, asp::Query>) {
          return json{{"query", {{"mode", asp::to_string(v.mode)},
                                 {"atom", asp::to_string(v.atom)}}}};
        } else if constexpr (std::is_same_v<T, asp::QueryResult>) {
          return json{{"query", {{"mode", asp::to_string(v.query.mode)},
                                 {"atom", asp::to_string(v.query.atom)}}},
                      {"value", v.value}};
        } else {
          return json{{"text", v.value}};
        }
      },
      c);
}

asp::Query query_from_json(const json& q, std::size_t offset) {
  if (!q.is_object() || !q.contains("mode") || !q.contains("atom") ||
      !q["mode"].is_string() || !q["atom"].is_string()) {
    throw codec_error(offset, "malformed query object");
  }
  asp::Query out;
  auto mode = asp::query_mode_from(q["mode"].get<std::string>());
  if (!mode)
    throw codec_error(offset,
                      "unknown query mode: " + q["mode"].get<std::string>());
  out.mode = *mode;
  try {
    out.atom = asp::parse_ground_atom(q["atom"].get<std::string>());
  } catch (const error& e) {
    throw codec_error(offset, e.what());
  }
  return out;
}

Content content_from_json(const json& c, std::size_t offset) {
  if (c.is_string()) {
    try {
      return asp::parse_ground_atom(c.get<std::string>());
    } catch (const error& e) {
      throw codec_error(offset, std::string("bad atom content: ") + e.what());
    }
  }
  if (c.is_object()) {
    if (c.contains("text")) {
      if (!c["text"].is_string())
        throw codec_error(offset, "text content must be a string");
      return Text{c["text"].get<std::string>()};
    }
    if (c.contains("query")) {
      asp::Query q = query_from_json(c["query"], offset);
      if (c.contains("value")) {
        if (!c["value"].is_boolean())
          throw codec_error(offset, "query result value must be a boolean");
        return asp::QueryResult{q, c["value"].get<bool>()};
      }
      return q;
    }
  }
  throw codec_error(offset, "unrecognized content shape");
}

void check_invariants(const Message& m) {
  if (m.sender.empty()) throw error("message has empty sender");
  if (m.receiver.empty()) throw error("message has empty receiver");
  if (m.id.empty()) throw error("message has empty id");
  bool needs_reply_to = m.performative == Performative::CONFIRM ||
                        m.performative == Performative::FAILURE;
  if (needs_reply_to && !m.in_reply_to) {
    throw error(to_string(m.performative) +
                " message must carry in_reply_to (id " + m.id + ")");
  }
}

constexpr std::size_t kHeader = 4;

}  // namespace

std::vector<std::uint8_t> encode(const Message& m) {
  check_invariants(m);
  json j;
  j["performative"] = to_string(m.performative);
  j["sender"] = m.sender;
  j["receiver"] = m.receiver;
  j["id"] = m.id;
  if (m.in_reply_to) j["in_reply_to"] = *m.in_reply_to;
  j["content"] = content_to_json(m.content);
  std::string payload = j.dump();

  std::vector<std::uint8_t> frame;
  frame.reserve(kHeader + payload.size());
  auto len = static_cast<std::uint32_t>(payload.size());
  frame.push_back(static_cast<std::uint8_t>((len >> 24) & 0xff));
  frame.push_back(static_cast<std::uint8_t>((len >> 16) & 0xff));
  frame.push_back(static_cast<std::uint8_t>((len >> 8) & 0xff));
  frame.push_back(static_cast<std::uint8_t>(len & 0xff));
  frame.insert(frame.end(), payload.begin(), payload.end());
  return frame;
}

namespace {

Message decode_payload(const std::uint8_t* data, std::size_t size) {
  json j = json::parse(data, data + size, nullptr, false);
  if (j.is_discarded()) throw codec_error(kHeader, "payload is not valid JSON");
  if (!j.is_object()) throw codec_error(kHeader, "payload is not a JSON object");

  auto field = [&](const char* name) -> std::string {
    if (!j.contains(name) || !j[name].is_string())
      throw codec_error(kHeader, std::string("missing or non-string field: ") + name);
    return j[name].get<std::string>();
  };

  Message m;
  m.performative = [&] {
    try {
      return performative_from(field("performative"));
    } catch (const codec_error&) {
      throw;
    } catch (const error& e) {
      throw codec_error(kHeader, e.what());
    }
  }();
  m.sender = field("sender");
  m.receiver = field("receiver");
  m.id = field("id");
  if (j.contains("in_reply_to")) {
    if (!j["in_reply_to"].is_string())
      throw codec_error(kHeader, "in_reply_to must be a string");
    m.in_reply_to = j["in_reply_to"].get<std::string>();
  }
  if (!j.contains("content")) throw codec_error(kHeader, "missing field: content");
  m.content = content_from_json(j["content"], kHeader);

  try {
    check_invariants(m);
  } catch (const error& e) {
    throw codec_error(kHeader, e.what());
  }
  return m;
}

}  // namespace

Message decode(const std::uint8_t* data, std::size_t size) {
  if (size < kHeader) throw codec_error(0, "frame shorter than length prefix");
  std::uint32_t len = (static_cast<std::uint32_t>(data[0]) << 24) |
                      (static_cast<std::uint32_t>(data[1]) << 16) |
                      (static_cast<std::uint32_t>(data[2]) << 8) |
                      static_cast<std::uint32_t>(data[3]);
  if (size < kHeader + len) throw codec_error(0, "truncated frame payload");
  if (size > kHeader + len)
    throw codec_error(kHeader + len, "trailing bytes after frame");
  return decode_payload(data + kHeader, len);
}

Message decode(const std::vector<std::uint8_t>& frame) {
  return decode(frame.data(), frame.size());
}

std::optional<std::pair<Message, std::size_t>> try_decode(
    const std::uint8_t* data, std::size_t size) {
  if (size < kHeader) return std::nullopt;
  std::uint32_t len = (static_cast<std::uint32_t>(data[0]) << 24) |
                      (static_cast<std::uint32_t>(data[1]) << 16) |
                      (static_cast<std::uint32_t>(data[2]) << 8) |
                      static_cast<std::uint32_t>(data[3]);
  if (size < kHeader + len) return std::nullopt;
  return std::make_pair(decode_payload(data + kHeader, len), kHeader + len);
}

}  // namespace muasp::msg
