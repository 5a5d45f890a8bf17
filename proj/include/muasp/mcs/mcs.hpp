#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "muasp/asp/query.hpp"
#include "muasp/asp/solver.hpp"
#include "muasp/shell/shell.hpp"

namespace muasp::mcs {

// Role-typed placeholder in a bridge-rule body, e.g. anycar(C): resolved
// against the registered contexts holding that role.
struct Designator {
  std::string role;
  std::string var;

  auto operator<=>(const Designator&) const = default;
};

// Either a concrete context name or a designator.
struct ContextRef {
  std::string name;  // empty while designator is set
  std::optional<Designator> designator;

  bool concrete() const { return !designator.has_value(); }
  auto operator<=>(const ContextRef&) const = default;
};

// op tags: "add" (union into the kb, monotone) or "replace" (swap out all
// facts of the atom's predicate; excluded from convergence guarantees).
// Schedules may additionally use "del".
struct BridgeHead {
  std::string op;
  asp::Atom atom;

  auto operator<=>(const BridgeHead&) const = default;
};

struct BridgeLit {
  ContextRef ref;
  asp::Atom atom;

  auto operator<=>(const BridgeLit&) const = default;
};

struct BridgeRule {
  std::string dest;
  BridgeHead head;
  std::vector<BridgeLit> body;  // nonempty

  auto operator<=>(const BridgeRule&) const = default;
};

bool is_concrete(const BridgeRule& r);

// Reads the textual designator spelling role(VAR); plain names yield
// nullopt, anything else malformed throws. Used for the dest slot and the
// system-file ref tokens alike.
std::optional<Designator> parse_designator(const std::string& text);

std::string to_string(const Designator& d);
std::string to_string(const BridgeHead& h);
std::string to_string(const BridgeRule& r);

// Tuple of per-context consequence sets; failed marks contexts whose
// consequence computation did not succeed (their set is empty).
struct DataState {
  std::map<std::string, asp::AnswerSet> sets;
  std::set<std::string> failed;

  bool operator==(const DataState&) const = default;
};

std::string to_string(const DataState& s);

// One MCS node: name, roles, a knowledge base, a consequence function, and
// the management/update behaviors that elaborate incoming heads.
class Context {
 public:
  Context(std::string name, std::vector<std::string> roles);
  virtual ~Context() = default;

  const std::string& name() const { return name_; }
  const std::vector<std::string>& roles() const { return roles_; }

  // Consequences of the current kb. Deterministic for a fixed kb; throws
  // muasp::error when the kb has no acceptable consequence set.
  virtual asp::AnswerSet acc() = 0;

  // Management function: incorporate one bridge-rule head. source names the
  // context the triggering data came from (empty for none).
  virtual void apply(const BridgeHead& head, const std::string& source) = 0;

  // Update operator for scheduled changes; ops add/del/replace.
  virtual void update(const BridgeHead& change) = 0;

  // Triggering function over (time, rule); unset means always triggered.
  std::function<bool(int, const BridgeRule&)> trigger;

 private:
  std::string name_;
  std::vector<std::string> roles_;
};

// Plain fact store: acc returns the facts themselves.
class FactStoreContext : public Context {
 public:
  FactStoreContext(std::string name, std::vector<std::string> roles,
                   std::set<asp::Atom> facts = {});

  asp::AnswerSet acc() override;
  void apply(const BridgeHead& head, const std::string& source) override;
  void update(const BridgeHead& change) override;

  const std::set<asp::Atom>& facts() const { return facts_; }

 private:
  std::set<asp::Atom> facts_;
};

// In-process service context: kb = descriptor program + injected facts.
// acc solves, selects the first answer set, and adds a mode-tagged atom for
// every true descriptor query (e.g. K go(...) -> k_go(...)).
class ServiceContext : public Context {
 public:
  ServiceContext(std::string name, std::vector<std::string> roles,
                 shell::ServiceDescriptor descriptor, bool activated = true);

  asp::AnswerSet acc() override;
  void apply(const BridgeHead& head, const std::string& source) override;
  void update(const BridgeHead& change) override;

  const shell::ServiceDescriptor& descriptor() const { return descriptor_; }
  const std::set<asp::Atom>& injected() const { return injected_; }
  // Answer sets behind the most recent successful acc, for inspection.
  const std::vector<asp::AnswerSet>& last_sets() const { return last_sets_; }

 private:
  shell::ServiceDescriptor descriptor_;
  std::set<asp::Atom> injected_;
  std::vector<asp::AnswerSet> last_sets_;
};

// Predicate tag for a true query result: K go(...) -> k_go(...).
asp::Atom mode_tagged(const asp::QueryResult& qr);

struct System {
  std::vector<std::unique_ptr<Context>> contexts;  // declaration order
  std::vector<BridgeRule> rules;                   // declaration order

  Context* find(const std::string& name);
  const Context* find(const std::string& name) const;
  // Names of contexts holding the role, declaration order.
  std::vector<std::string> lookup(const std::string& role) const;
};

// One concrete rule per combination of registrants matching each designator;
// designators sharing a variable must share a role and co-refer. A role with
// no registrants leaves the rule dormant (empty result). The resolved rule
// must come out ground, else muasp::error.
std::vector<BridgeRule> resolve_designators(
    const BridgeRule& r,
    const std::function<std::vector<std::string>(const std::string&)>& lookup);

std::vector<BridgeRule> resolve_all(const System& M);

// True iff every body atom is present in its context's consequence set.
// Throws muasp::error when the rule is not concrete or references a context
// absent from the state.
bool applicable(const BridgeRule& r, const DataState& s);

struct AppliedHead {
  std::string dest;
  BridgeHead head;
  std::string source;  // first body context

  auto operator<=>(const AppliedHead&) const = default;
};

// Heads of all applicable rules, rule-declaration order.
std::vector<AppliedHead> app(const DataState& s,
                             const std::vector<BridgeRule>& rules);

// Per-context consequences with no bridge effects applied.
DataState initial_state(System& M);

// S'_i = acc_i(mng_i(app(s) heads for i, kb_i)); kbs grow via apply. A
// failing acc yields an empty set plus the failed flag.
DataState step(System& M, const DataState& s);
DataState step(System& M, const DataState& s,
               const std::vector<BridgeRule>& rules);

struct Equilibrium {
  DataState state;
  int steps = 0;  // step() calls used, including the one proving stability
};

class equilibrium_error : public error {
 public:
  equilibrium_error(std::string what, DataState previous, DataState last,
                    int time = -1);

  DataState previous;
  DataState last;
  int time;  // -1 outside timed runs
};

Equilibrium compute_equilibrium(System& M, const DataState& initial,
                                int max_iter = 1000);
Equilibrium compute_equilibrium(System& M, const DataState& initial,
                                int max_iter,
                                const std::vector<BridgeRule>& rules);

struct Update {
  std::string context;
  BridgeHead change;

  auto operator<=>(const Update&) const = default;
};

using Schedule = std::map<int, std::vector<Update>>;

struct TimedRecord {
  int time = 0;
  Equilibrium eq;
};

// Discrete run over 0..horizon: per tick, scheduled updates first, then the
// triggering filter, then an equilibrium from fresh per-context consequences.
// Non-convergence rethrows with the tick's timestamp.
std::vector<TimedRecord> timed_run(System& M, const Schedule& schedule,
                                   int horizon, int max_iter = 1000);

}  // namespace muasp::mcs
