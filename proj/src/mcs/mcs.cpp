#include "muasp/mcs/mcs.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace muasp::mcs {

namespace {

bool known_op(const std::string& op) {
  return op == "add" || op == "del" || op == "replace";
}

void check_head_op(const BridgeHead& h, bool allow_del) {
  if (!known_op(h.op) || (!allow_del && h.op == "del")) {
    throw error("unknown bridge operation: " + h.op);
  }
}

void erase_predicate(std::set<asp::Atom>& facts, const std::string& predicate,
                     const std::set<asp::Atom>& keep = {}) {
  for (auto it = facts.begin(); it != facts.end();) {
    if (it->predicate == predicate && keep.count(*it) == 0) {
      it = facts.erase(it);
    } else {
      ++it;
    }
  }
}

void edit_facts(std::set<asp::Atom>& facts, const BridgeHead& h,
                const std::set<asp::Atom>& protect = {}) {
  if (!h.atom.is_ground()) {
    throw error("bridge head must be ground: " + asp::to_string(h.atom));
  }
  if (h.op == "add") {
    facts.insert(h.atom);
  } else if (h.op == "del") {
    if (protect.count(h.atom) == 0) facts.erase(h.atom);
  } else if (h.op == "replace") {
    erase_predicate(facts, h.atom.predicate, protect);
    facts.insert(h.atom);
  } else {
    throw error("unknown bridge operation: " + h.op);
  }
}

}  // namespace

std::optional<Designator> parse_designator(const std::string& text) {
  auto open = text.find('(');
  if (open == std::string::npos) return std::nullopt;
  if (text.back() != ')') throw error("malformed designator: " + text);
  std::string role = text.substr(0, open);
  std::string var = text.substr(open + 1, text.size() - open - 2);
  while (!var.empty() && var.front() == ' ') var.erase(var.begin());
  while (!var.empty() && var.back() == ' ') var.pop_back();
  if (role.empty() || var.empty() || !std::isupper((unsigned char)var[0])) {
    throw error("malformed designator: " + text);
  }
  return Designator{role, var};
}

bool is_concrete(const BridgeRule& r) {
  return r.dest.find('(') == std::string::npos &&
         std::all_of(r.body.begin(), r.body.end(),
                     [](const BridgeLit& l) { return l.ref.concrete(); });
}

std::string to_string(const Designator& d) { return d.role + "(" + d.var + ")"; }

std::string to_string(const BridgeHead& h) {
  return h.op + "(" + asp::to_string(h.atom) + ")";
}

std::string to_string(const BridgeRule& r) {
  std::ostringstream out;
  out << r.dest << ": " << to_string(r.head) << " <- ";
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    if (i) out << ", ";
    const BridgeLit& l = r.body[i];
    out << "(" << (l.ref.concrete() ? l.ref.name : to_string(*l.ref.designator))
        << ": " << asp::to_string(l.atom) << ")";
  }
  out << ".";
  return out.str();
}

std::string to_string(const DataState& s) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [name, set] : s.sets) {
    if (!first) out << "; ";
    first = false;
    out << name << ": {" << asp::to_string(set) << "}";
    if (s.failed.count(name)) out << " failed";
  }
  out << "}";
  return out.str();
}

Context::Context(std::string name, std::vector<std::string> roles)
    : name_(std::move(name)), roles_(std::move(roles)) {}

FactStoreContext::FactStoreContext(std::string name,
                                   std::vector<std::string> roles,
                                   std::set<asp::Atom> facts)
    : Context(std::move(name), std::move(roles)), facts_(std::move(facts)) {}

asp::AnswerSet FactStoreContext::acc() { return asp::AnswerSet{facts_}; }

void FactStoreContext::apply(const BridgeHead& head, const std::string&) {
  check_head_op(head, /*allow_del=*/false);
  edit_facts(facts_, head);
}

void FactStoreContext::update(const BridgeHead& change) {
  check_head_op(change, /*allow_del=*/true);
  edit_facts(facts_, change);
}

ServiceContext::ServiceContext(std::string name, std::vector<std::string> roles,
                               shell::ServiceDescriptor descriptor,
                               bool activated)
    : Context(std::move(name), std::move(roles)),
      descriptor_(std::move(descriptor)) {
  if (activated && descriptor_.activation) {
    injected_.insert(*descriptor_.activation);
  }
}

asp::AnswerSet ServiceContext::acc() {
  asp::Program p = descriptor_.program;
  for (const asp::Atom& f : injected_) p.rules.push_back(asp::Rule::fact(f));
  std::vector<asp::AnswerSet> sets = asp::solve(p);
  if (sets.empty()) {
    throw error("context " + name() + ": program is inconsistent");
  }
  last_sets_ = sets;
  asp::AnswerSet s = shell::select_answer_set(sets, shell::SelectionPolicy{});
  for (const asp::Query& q : descriptor_.queries) {
    if (asp::eval_query(q.mode, q.atom, sets)) {
      s.atoms.insert(mode_tagged(asp::QueryResult{q, true}));
    }
  }
  return s;
}

void ServiceContext::apply(const BridgeHead& head, const std::string&) {
  check_head_op(head, /*allow_del=*/false);
  std::set<asp::Atom> protect;
  if (descriptor_.activation) protect.insert(*descriptor_.activation);
  edit_facts(injected_, head, protect);
}

void ServiceContext::update(const BridgeHead& change) {
  check_head_op(change, /*allow_del=*/true);
  std::set<asp::Atom> protect;
  if (descriptor_.activation) protect.insert(*descriptor_.activation);
  edit_facts(injected_, change, protect);
}

asp::Atom mode_tagged(const asp::QueryResult& qr) {
  const char* prefix = nullptr;
  switch (qr.query.mode) {
    case asp::QueryMode::BRAVE:
      prefix = "brave_";
      break;
    case asp::QueryMode::NAF_SOME:
      prefix = "some_not_";
      break;
    case asp::QueryMode::POSSIBLE:
      prefix = "m_";
      break;
    case asp::QueryMode::KNOWN:
      prefix = "k_";
      break;
    case asp::QueryMode::NOT_ALL:
      prefix = "not_";
      break;
  }
  asp::Atom tagged = qr.query.atom;
  tagged.predicate = std::string(prefix) + tagged.predicate;
  return tagged;
}

Context* System::find(const std::string& name) {
  for (auto& c : contexts) {
    if (c->name() == name) return c.get();
  }
  return nullptr;
}

const Context* System::find(const std::string& name) const {
  for (const auto& c : contexts) {
    if (c->name() == name) return c.get();
  }
  return nullptr;
}

std::vector<std::string> System::lookup(const std::string& role) const {
  std::vector<std::string> names;
  for (const auto& c : contexts) {
    const auto& rs = c->roles();
    if (std::find(rs.begin(), rs.end(), role) != rs.end()) {
      names.push_back(c->name());
    }
  }
  return names;
}

namespace {

void substitute_var(asp::Atom& a, const std::string& var,
                    const std::string& name) {
  for (asp::Term& t : a.args) {
    if (t.is_variable() && t.name == var) t = asp::Term::constant(name);
  }
}

void require_ground(const BridgeRule& r) {
  auto check = [&r](const asp::Atom& a) {
    if (!a.is_ground()) {
      throw error("unresolved variable in bridge rule: " + to_string(r));
    }
  };
  check(r.head.atom);
  for (const BridgeLit& l : r.body) check(l.atom);
}

}  // namespace

std::vector<BridgeRule> resolve_designators(
    const BridgeRule& r,
    const std::function<std::vector<std::string>(const std::string&)>& lookup) {
  if (r.body.empty()) throw error("bridge rule needs a body: " + to_string(r));
  if (!known_op(r.head.op) || r.head.op == "del") {
    throw error("bridge heads may add or replace, not " + r.head.op);
  }
  if (is_concrete(r)) {
    require_ground(r);
    return {r};
  }

  // Distinct designator variables, first-occurrence order; a variable reused
  // across designators must keep one role and binds them to one registrant.
  std::vector<std::string> vars;
  std::map<std::string, std::string> role_of;
  auto note = [&vars, &role_of](const Designator& d) {
    auto [it, fresh] = role_of.emplace(d.var, d.role);
    if (fresh) {
      vars.push_back(d.var);
    } else if (it->second != d.role) {
      throw error("designator variable " + d.var + " used with roles " +
                  it->second + " and " + d.role);
    }
  };
  std::optional<Designator> dest_des = parse_designator(r.dest);
  if (dest_des) note(*dest_des);
  for (const BridgeLit& l : r.body) {
    if (!l.ref.concrete()) note(*l.ref.designator);
  }

  std::vector<BridgeRule> out;
  std::map<std::string, std::string> binding;
  auto emit = [&]() {
    BridgeRule concrete = r;
    if (dest_des) concrete.dest = binding.at(dest_des->var);
    for (BridgeLit& l : concrete.body) {
      if (l.ref.concrete()) continue;
      const Designator& d = *l.ref.designator;
      l.ref = ContextRef{binding.at(d.var), std::nullopt};
    }
    for (const auto& [var, name] : binding) {
      substitute_var(concrete.head.atom, var, name);
      for (BridgeLit& l : concrete.body) substitute_var(l.atom, var, name);
    }
    require_ground(concrete);
    out.push_back(std::move(concrete));
  };
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == vars.size()) {
      emit();
      return;
    }
    for (const std::string& name : lookup(role_of.at(vars[i]))) {
      binding[vars[i]] = name;
      rec(i + 1);
    }
    binding.erase(vars[i]);
  };
  if (!vars.empty()) {
    // Any role with no registrant leaves the rule dormant.
    for (const std::string& v : vars) {
      if (lookup(role_of.at(v)).empty()) return {};
    }
  }
  rec(0);
  return out;
}

std::vector<BridgeRule> resolve_all(const System& M) {
  auto lookup = [&M](const std::string& role) { return M.lookup(role); };
  std::vector<BridgeRule> out;
  for (const BridgeRule& r : M.rules) {
    std::vector<BridgeRule> rs = resolve_designators(r, lookup);
    out.insert(out.end(), rs.begin(), rs.end());
  }
  return out;
}

bool applicable(const BridgeRule& r, const DataState& s) {
  if (!is_concrete(r)) {
    throw error("applicability needs a concrete rule: " + to_string(r));
  }
  for (const BridgeLit& l : r.body) {
    auto it = s.sets.find(l.ref.name);
    if (it == s.sets.end()) {
      throw error("bridge rule references unknown context " + l.ref.name);
    }
    if (!it->second.contains(l.atom)) return false;
  }
  return true;
}

std::vector<AppliedHead> app(const DataState& s,
                             const std::vector<BridgeRule>& rules) {
  std::vector<AppliedHead> heads;
  for (const BridgeRule& r : rules) {
    if (applicable(r, s)) {
      heads.push_back(AppliedHead{r.dest, r.head, r.body.front().ref.name});
    }
  }
  return heads;
}

namespace {

DataState read_accs(System& M) {
  DataState s;
  for (auto& c : M.contexts) {
    try {
      s.sets[c->name()] = c->acc();
    } catch (const error&) {
      s.sets[c->name()] = asp::AnswerSet{};
      s.failed.insert(c->name());
    }
  }
  return s;
}

}  // namespace

DataState initial_state(System& M) { return read_accs(M); }

DataState step(System& M, const DataState& s,
               const std::vector<BridgeRule>& rules) {
  for (const AppliedHead& h : app(s, rules)) {
    Context* dest = M.find(h.dest);
    if (!dest) throw error("bridge rule targets unknown context " + h.dest);
    dest->apply(h.head, h.source);
  }
  return read_accs(M);
}

DataState step(System& M, const DataState& s) {
  return step(M, s, resolve_all(M));
}

equilibrium_error::equilibrium_error(std::string what, DataState previous_state,
                                     DataState last_state, int at_time)
    : error(std::move(what)),
      previous(std::move(previous_state)),
      last(std::move(last_state)),
      time(at_time) {}

Equilibrium compute_equilibrium(System& M, const DataState& initial,
                                int max_iter,
                                const std::vector<BridgeRule>& rules) {
  DataState cur = initial;
  for (int n = 1; n <= max_iter; ++n) {
    DataState next = step(M, cur, rules);
    if (next == cur) return Equilibrium{std::move(next), n};
    cur = std::move(next);
  }
  DataState last = step(M, cur, rules);
  throw equilibrium_error(
      "no equilibrium within " + std::to_string(max_iter) + " steps", cur,
      last);
}

Equilibrium compute_equilibrium(System& M, const DataState& initial,
                                int max_iter) {
  return compute_equilibrium(M, initial, max_iter, resolve_all(M));
}

std::vector<TimedRecord> timed_run(System& M, const Schedule& schedule,
                                   int horizon, int max_iter) {
  std::vector<TimedRecord> records;
  for (int t = 0; t <= horizon; ++t) {
    if (auto it = schedule.find(t); it != schedule.end()) {
      for (const Update& u : it->second) {
        Context* c = M.find(u.context);
        if (!c) throw error("scheduled update targets unknown context " + u.context);
        c->update(u.change);
      }
    }
    std::vector<BridgeRule> rules;
    for (const BridgeRule& r : resolve_all(M)) {
      const Context* dest = M.find(r.dest);
      if (!dest) throw error("bridge rule targets unknown context " + r.dest);
      if (!dest->trigger || dest->trigger(t, r)) rules.push_back(r);
    }
    try {
      Equilibrium eq = compute_equilibrium(M, initial_state(M), max_iter, rules);
      records.push_back(TimedRecord{t, std::move(eq)});
    } catch (equilibrium_error& e) {
      throw equilibrium_error(std::string(e.what()) + " at time " +
                                  std::to_string(t),
                              std::move(e.previous), std::move(e.last), t);
    }
  }
  return records;
}

}  // namespace muasp::mcs
