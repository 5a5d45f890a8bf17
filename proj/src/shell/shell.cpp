#include "muasp/shell/shell.hpp"

#include <algorithm>

#include "muasp/asp/solver.hpp"

namespace muasp::shell {

Schema schema_of(const Atom& a) { return Schema{a.predicate, a.args.size()}; }

std::string to_string(const Schema& s) {
  if (s.arity == 0) return s.predicate;
  return s.predicate + "/" + std::to_string(s.arity);
}

Schema parse_schema(const std::string& text) {
  auto slash = text.rfind('/');
  if (slash == std::string::npos) return Schema{text, 0};
  Schema s;
  s.predicate = text.substr(0, slash);
  s.arity = static_cast<std::size_t>(std::stoul(text.substr(slash + 1)));
  if (s.predicate.empty()) throw error("bad schema: " + text);
  return s;
}

std::set<Schema> compute_heads(const Program& p) {
  std::set<Schema> out;
  for (const asp::Rule& r : p.rules)
    if (r.head && !asp::is_reserved_atom(*r.head)) out.insert(schema_of(*r.head));
  return out;
}

std::set<Schema> compute_undef(const Program& p) {
  std::set<Schema> heads = compute_heads(p);
  std::set<Schema> out;
  for (const asp::Rule& r : p.rules) {
    for (const Atom& a : r.pos_body)
      if (!heads.count(schema_of(a))) out.insert(schema_of(a));
    for (const Atom& a : r.neg_body)
      if (!heads.count(schema_of(a))) out.insert(schema_of(a));
  }
  return out;
}

std::vector<std::string> validate_descriptor(const ServiceDescriptor& d) {
  std::set<Schema> heads = compute_heads(d.program);
  std::set<Schema> undef = compute_undef(d.program);
  std::vector<std::string> bad;
  auto want_undef = [&](const Atom& a, const char* what) {
    if (!undef.count(schema_of(a)))
      bad.push_back(std::string(what) + " atom " + asp::to_string(a) +
                    " is not in Undef of the program");
  };
  if (d.activation) want_undef(*d.activation, "activation");
  if (d.stop) want_undef(*d.stop, "stop");
  for (const Schema& s : d.inputs)
    if (!undef.count(s))
      bad.push_back("input schema " + to_string(s) + " is not in Undef of the program");
  for (const Schema& s : d.outputs)
    if (!heads.count(s))
      bad.push_back("output schema " + to_string(s) + " is not in Heads of the program");
  for (const Query& q : d.queries) {
    if (!q.atom.is_ground())
      bad.push_back("query atom " + asp::to_string(q.atom) + " is not ground");
    if (!heads.count(schema_of(q.atom)))
      bad.push_back("query atom " + asp::to_string(q.atom) + " is not in Heads of the program");
  }
  return bad;
}

ShellState activate(const ShellState& state, const ServiceDescriptor& d) {
  if (state.phase == Phase::STOPPED) throw error("activate: shell already stopped");
  if (state.phase == Phase::ACTIVE) throw error("activate: shell already active");
  ShellState next = state;
  next.phase = Phase::ACTIVE;
  if (d.activation) next.current_facts.insert(*d.activation);
  return next;
}

ShellState stop(const ShellState& state, const ServiceDescriptor& d) {
  if (state.phase != Phase::ACTIVE) throw error("stop: shell is not active");
  ShellState next = state;
  next.phase = Phase::STOPPED;
  if (d.stop) next.current_facts.insert(*d.stop);
  return next;
}

AnswerSet select_answer_set(const std::vector<AnswerSet>& sets, const SelectionPolicy& policy) {
  if (sets.empty()) throw error("select_answer_set: empty list");
  switch (policy.kind) {
    case SelectionPolicy::FIRST:
      return sets.front();
    case SelectionPolicy::MAXIMIZE: {
      std::size_t best = 0;
      long best_w = 0;
      for (std::size_t i = 0; i < sets.size(); ++i) {
        long w = 0;
        for (const Atom& a : sets[i].atoms) {
          auto it = policy.weights.find(a);
          if (it != policy.weights.end()) w += it->second;
        }
        if (i == 0 || w > best_w) {
          best = i;
          best_w = w;
        }
      }
      return sets[best];
    }
    case SelectionPolicy::CUSTOM: {
      if (!policy.choose) throw error("select_answer_set: CUSTOM policy without hook");
      std::size_t i = policy.choose(sets);
      if (i >= sets.size()) throw error("select_answer_set: hook index out of range");
      return sets[i];
    }
  }
  throw error("select_answer_set: bad policy");
}

std::vector<IoEntry> retention_filter(const std::vector<IoEntry>& entries,
                                      const RetentionMode& mode) {
  std::vector<IoEntry> remove;
  for (const IoEntry& e : entries) {
    if (mode.kind == RetentionMode::STATELESS || !mode.retain.count(e.input.predicate))
      remove.push_back(e);
  }
  return remove;
}

TickResult tick(const ShellState& state, const ServiceDescriptor& d,
                const std::vector<Arrival>& arrivals, const SelectionPolicy& policy) {
  if (state.phase == Phase::STOPPED) throw error("tick: shell is stopped");
  if (state.phase != Phase::ACTIVE) throw error("tick: shell is not active");

  TickResult res;
  res.state = state;
  ShellState& st = res.state;

  for (const Arrival& in : arrivals) {
    if (!in.atom.is_ground()) throw error("tick: non-ground input " + asp::to_string(in.atom));
    if (!d.inputs.count(schema_of(in.atom)))
      throw error("tick: input " + asp::to_string(in.atom) + " matches no input schema");
    IoEntry e;
    e.input = in.atom;
    e.requester = in.requester;
    e.message_id = in.message_id;
    e.retain = d.retention.kind == RetentionMode::STATEFUL &&
               d.retention.retain.count(in.atom.predicate) > 0;
    st.io_table.push_back(std::move(e));
    st.current_facts.insert(in.atom);
  }

  Program p = d.program;
  for (const Atom& f : st.current_facts) p.rules.push_back(asp::Rule::fact(f));
  std::vector<AnswerSet> sets = asp::solve(p);
  res.answer_sets = sets;

  if (sets.empty()) {
    res.consistent = false;
    for (const IoEntry& e : st.io_table)
      if (e.requester != kSensor) res.failures.push_back(e);
  } else {
    res.selected = select_answer_set(sets, policy);
    for (const Atom& a : res.selected->atoms) {
      if (!d.outputs.count(schema_of(a))) continue;
      TickOutput o;
      o.atom = a;
      for (const IoEntry& e : st.io_table) {
        if (e.requester == kSensor) continue;
        if (e.expected_output && *e.expected_output != schema_of(a)) continue;
        o.recipients.push_back(e);
      }
      res.outputs.push_back(std::move(o));
    }
    for (const Query& q : d.queries)
      res.query_results.push_back(QueryResult{q, asp::eval_query(q.mode, q.atom, sets)});
  }

  // Def. 2 retraction: drop the annotations, then any fact no surviving
  // entry still justifies
  std::vector<IoEntry> removed = retention_filter(st.io_table, d.retention);
  auto is_removed = [&](const IoEntry& e) {
    return std::find(removed.begin(), removed.end(), e) != removed.end();
  };
  std::vector<IoEntry> kept;
  for (const IoEntry& e : st.io_table)
    if (!is_removed(e)) kept.push_back(e);
  for (const IoEntry& e : removed) {
    if (d.activation && e.input == *d.activation) continue;  // the gate fact survives
    if (d.stop && e.input == *d.stop) continue;
    bool still = false;
    for (const IoEntry& k : kept) still = still || k.input == e.input;
    if (!still) st.current_facts.erase(e.input);
  }
  st.io_table = std::move(kept);
  ++st.tick_count;
  return res;
}

}  // namespace muasp::shell
