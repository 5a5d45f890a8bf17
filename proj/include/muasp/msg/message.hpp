#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "muasp/asp/ast.hpp"
#include "muasp/asp/query.hpp"
#include "muasp/asp/errors.hpp"

namespace muasp::msg {

enum class Performative { REQUEST, CONFIRM, QUERY_IF, FAILURE, INFORM };

std::string to_string(Performative p);
Performative performative_from(const std::string& name);

// Plain-text payload, used for failure reasons and registry replies.
struct Text {
  std::string value;

  auto operator<=>(const Text&) const = default;
};

using Content = std::variant<asp::Atom, asp::Query, asp::QueryResult, Text>;

std::string to_string(const Content& c);

struct Message {
  Performative performative = Performative::INFORM;
  std::string sender;
  std::string receiver;
  std::string id;
  std::optional<std::string> in_reply_to;
  Content content;

  bool operator==(const Message&) const = default;
};

std::string to_string(const Message& m);

// Raised when a frame cannot be decoded. offset() is the byte position in the
// frame buffer where decoding gave up (0 when the length prefix itself is bad).
class codec_error : public error {
 public:
  codec_error(std::size_t offset, const std::string& what);

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Serializes a message to a complete frame: a 4-byte big-endian payload length
// followed by the payload, a UTF-8 JSON object. Throws muasp::error when the
// message violates a protocol invariant (missing correlation id on CONFIRM or
// FAILURE, empty sender/receiver/id).
std::vector<std::uint8_t> encode(const Message& m);

// Decodes one complete frame produced by encode. Throws codec_error on a
// short buffer, trailing garbage, malformed JSON, or an invalid field.
Message decode(const std::uint8_t* data, std::size_t size);
Message decode(const std::vector<std::uint8_t>& frame);

// Streaming helper: if buffer starts with a complete frame, decodes it and
// returns the number of bytes consumed; returns nullopt when more bytes are
// needed. Malformed payloads still throw codec_error.
std::optional<std::pair<Message, std::size_t>> try_decode(
    const std::uint8_t* data, std::size_t size);

}  // namespace muasp::msg
