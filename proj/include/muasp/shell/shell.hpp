#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "muasp/asp/ast.hpp"
#include "muasp/asp/errors.hpp"
#include "muasp/asp/query.hpp"

namespace muasp::shell {

using asp::AnswerSet;
using asp::Atom;
using asp::Program;
using asp::Query;
using asp::QueryResult;

// Predicate name plus arity; the unit Heads/Undef and the descriptor's
// input/output declarations are stated in.
struct Schema {
  std::string predicate;
  std::size_t arity = 0;
  auto operator<=>(const Schema&) const = default;
};

Schema schema_of(const Atom& a);
std::string to_string(const Schema& s);          // "pred/2", bare name for arity 0
Schema parse_schema(const std::string& text);    // accepts both spellings

struct RetentionMode {
  enum Kind { STATELESS, STATEFUL } kind = STATELESS;
  std::set<std::string> retain;  // predicates kept across ticks (STATEFUL)
  auto operator<=>(const RetentionMode&) const = default;
};

struct ServiceDescriptor {
  Program program;
  std::optional<Atom> activation;
  std::optional<Atom> stop;
  std::set<Schema> inputs;
  std::set<Schema> outputs;
  std::vector<Query> queries;
  RetentionMode retention;  // service property; stateless by default
};

// Marker requester for inputs that arrive from sensors and expect no answer.
inline const std::string kSensor = "SENSOR";

struct IoEntry {
  Atom input;
  std::string requester;                  // component name or kSensor
  std::optional<Schema> expected_output;  // absent: sensor, or "any output"
  bool retain = false;
  std::string message_id;
  auto operator<=>(const IoEntry&) const = default;
};

enum class Phase { NO_OPERATION, ACTIVE, STOPPED };

struct ShellState {
  Phase phase = Phase::NO_OPERATION;
  std::set<Atom> current_facts;  // injected inputs plus the activation/stop atoms
  std::vector<IoEntry> io_table;
  int tick_count = 0;
  int frequency = 1;  // abstract tick period; the caller drives the clock
};

struct SelectionPolicy {
  enum Kind { FIRST, MAXIMIZE, CUSTOM } kind = FIRST;
  std::map<Atom, int> weights;  // MAXIMIZE: absent atoms weigh 0
  std::function<std::size_t(const std::vector<AnswerSet>&)> choose;  // CUSTOM
};

// One elicited output atom and the pending entries it answers. Atoms are
// emitted even when nobody asked (sensor-driven services still act).
struct TickOutput {
  Atom atom;
  std::vector<IoEntry> recipients;
};

struct TickResult {
  bool consistent = true;
  std::optional<AnswerSet> selected;  // absent on inconsistency
  std::vector<AnswerSet> answer_sets;
  std::vector<TickOutput> outputs;
  std::vector<QueryResult> query_results;
  std::vector<IoEntry> failures;  // entries owed a failure notification
  ShellState state;
};

struct Arrival {
  Atom atom;
  std::string requester;
  std::string message_id;
};

// Rule-head schemas of p; constraints and hidden solver atoms contribute
// nothing.
std::set<Schema> compute_heads(const Program& p);

// Schemas occurring in rule bodies but defined by no head: the undefined
// vocabulary a service may accept as inputs.
std::set<Schema> compute_undef(const Program& p);

// Both Def.-style subset conditions; each offending atom or schema yields
// one human-readable violation line. Empty result means the descriptor is
// well formed.
std::vector<std::string> validate_descriptor(const ServiceDescriptor& d);

// NO_OPERATION -> ACTIVE; injects the activation fact when declared.
ShellState activate(const ShellState& state, const ServiceDescriptor& d);

// ACTIVE -> STOPPED; injects the stop fact when declared. Terminal.
ShellState stop(const ShellState& state, const ServiceDescriptor& d);

AnswerSet select_answer_set(const std::vector<AnswerSet>& sets, const SelectionPolicy& policy);

// Entries the retention mode discards after a tick.
std::vector<IoEntry> retention_filter(const std::vector<IoEntry>& entries,
                                      const RetentionMode& mode);

// One lifecycle loop body: ingest arrivals as facts, solve, select, elicit
// outputs and query results, retract per retention. On inconsistency the
// result carries failure notifications for every pending non-sensor entry
// and no outputs; inputs are still retracted.
TickResult tick(const ShellState& state, const ServiceDescriptor& d,
                const std::vector<Arrival>& arrivals, const SelectionPolicy& policy);

}  // namespace muasp::shell
