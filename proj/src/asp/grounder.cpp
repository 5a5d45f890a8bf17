#include "muasp/asp/grounder.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "muasp/asp/parser.hpp"

namespace muasp::asp {

namespace {

bool has_range(const Atom& a) {
  for (const Term& t : a.args)
    if (t.is_range()) return true;
  return false;
}

bool rule_has_range(const Rule& r) {
  if (r.head && has_range(*r.head)) return true;
  for (const Atom& a : r.pos_body)
    if (has_range(a)) return true;
  for (const Atom& a : r.neg_body)
    if (has_range(a)) return true;
  return false;
}

void expand_fact_args(const Atom& a, std::size_t idx, Atom& acc, Program& out) {
  if (idx == a.args.size()) {
    out.rules.push_back(Rule::fact(acc));
    return;
  }
  const Term& t = a.args[idx];
  if (t.is_range()) {
    for (std::int64_t v = t.value; v <= t.hi; ++v) {
      acc.args.push_back(Term::integer(static_cast<std::int32_t>(v)));
      expand_fact_args(a, idx + 1, acc, out);
      acc.args.pop_back();
    }
  } else {
    acc.args.push_back(t);
    expand_fact_args(a, idx + 1, acc, out);
    acc.args.pop_back();
  }
}

// Arithmetic evaluation over ground expressions. A side is an integer when
// every operand is an integer literal; a lone unsigned constant stands for
// itself (symbol); anything else does not evaluate.
struct SideValue {
  enum Kind { Int, Sym, None } kind = None;
  std::int64_t num = 0;
  std::string sym;
};

SideValue eval_side(const ArithExpr& e) {
  SideValue v;
  if (e.terms.size() == 1 && !e.terms[0].minus && e.terms[0].term.is_constant()) {
    v.kind = SideValue::Sym;
    v.sym = e.terms[0].term.name;
    return v;
  }
  std::int64_t sum = 0;
  for (const auto& en : e.terms) {
    if (!en.term.is_integer()) return v;  // None
    sum += en.minus ? -static_cast<std::int64_t>(en.term.value)
                    : static_cast<std::int64_t>(en.term.value);
  }
  if (sum < INT32_MIN || sum > INT32_MAX)
    throw ground_error("arithmetic overflow: " + to_string(e) + " = " + std::to_string(sum));
  v.kind = SideValue::Int;
  v.num = sum;
  return v;
}

enum class Tri { True, False, Unknown };

Tri eval_builtin(const Builtin& b) {
  SideValue l = eval_side(b.lhs);
  SideValue r = eval_side(b.rhs);
  if (l.kind == SideValue::None || r.kind == SideValue::None) return Tri::Unknown;
  if (l.kind == SideValue::Int && r.kind == SideValue::Int) {
    bool res = false;
    switch (b.op) {
      case CmpOp::Eq: res = l.num == r.num; break;
      case CmpOp::Ne: res = l.num != r.num; break;
      case CmpOp::Lt: res = l.num < r.num; break;
      case CmpOp::Le: res = l.num <= r.num; break;
      case CmpOp::Gt: res = l.num > r.num; break;
      case CmpOp::Ge: res = l.num >= r.num; break;
    }
    return res ? Tri::True : Tri::False;
  }
  if (l.kind == SideValue::Sym && r.kind == SideValue::Sym) {
    if (b.op == CmpOp::Eq) return l.sym == r.sym ? Tri::True : Tri::False;
    if (b.op == CmpOp::Ne) return l.sym != r.sym ? Tri::True : Tri::False;
    return Tri::Unknown;  // no order on symbols
  }
  // mixed sorts compare unequal; ordering them is meaningless
  if (b.op == CmpOp::Eq) return Tri::False;
  if (b.op == CmpOp::Ne) return Tri::True;
  return Tri::Unknown;
}

using Subst = std::map<std::string, Term>;

Term substitute(const Term& t, const Subst& s) {
  if (t.is_variable()) {
    auto it = s.find(t.name);
    if (it != s.end()) return it->second;
  }
  return t;
}

Atom substitute(const Atom& a, const Subst& s) {
  Atom out;
  out.predicate = a.predicate;
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back(substitute(t, s));
  return out;
}

ArithExpr substitute(const ArithExpr& e, const Subst& s) {
  ArithExpr out;
  out.terms.reserve(e.terms.size());
  for (const auto& en : e.terms) out.terms.push_back({en.minus, substitute(en.term, s)});
  return out;
}

Builtin substitute(const Builtin& b, const Subst& s) {
  return Builtin{b.op, substitute(b.lhs, s), substitute(b.rhs, s)};
}

// Ground instance of r under a total substitution, builtins stripped, or
// nothing when some builtin fails or does not evaluate.
std::optional<Rule> instantiate(const Rule& r, const Subst& s) {
  for (const Builtin& b : r.builtins)
    if (eval_builtin(substitute(b, s)) != Tri::True) return std::nullopt;
  Rule out;
  if (r.head) out.head = substitute(*r.head, s);
  out.pos_body.reserve(r.pos_body.size());
  for (const Atom& a : r.pos_body) out.pos_body.push_back(substitute(a, s));
  out.neg_body.reserve(r.neg_body.size());
  for (const Atom& a : r.neg_body) out.neg_body.push_back(substitute(a, s));
  return out;
}

bool unify(const Atom& pattern, const Atom& fact, Subst& s) {
  if (pattern.predicate != fact.predicate || pattern.args.size() != fact.args.size())
    return false;
  std::vector<std::pair<std::string, Term>> added;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    Term bound = substitute(pattern.args[i], s);
    if (bound.is_variable()) {
      s[bound.name] = fact.args[i];
      added.emplace_back(bound.name, fact.args[i]);
    } else if (bound != fact.args[i]) {
      for (auto& [k, v] : added) s.erase(k);
      return false;
    }
  }
  return true;
}

// Derivability-restricted instantiation machinery. Joins the positive body
// against the derivable set; '=' builtins may bind residual variables, but
// only to universe elements, matching what exhaustive substitution reaches.
class RelevantGrounder {
 public:
  explicit RelevantGrounder(const Program& p, const std::set<Term>& universe)
      : prog_(p), universe_(universe) {}

  Program run() {
    bool grew = true;
    while (grew) {
      grew = false;
      for (const Rule& r : prog_.rules) {
        if (!r.head) continue;
        Subst s;
        join(r, 0, s, [&](const Subst& total) {
          Atom h = substitute(*r.head, total);
          if (derived_.insert(h).second) {
            by_pred_[h.predicate].push_back(h);
            grew = true;
          }
        });
      }
    }
    Program out;
    std::set<Rule> seen;
    for (const Rule& r : prog_.rules) {
      Subst s;
      join(r, 0, s, [&](const Subst& total) {
        std::optional<Rule> inst = instantiate_checked(r, total);
        if (inst && seen.insert(*inst).second) out.rules.push_back(std::move(*inst));
      });
    }
    return out;
  }

 private:
  template <class Fn>
  void join(const Rule& r, std::size_t idx, Subst& s, const Fn& emit) {
    if (idx == r.pos_body.size()) {
      Subst total = s;
      if (!settle_builtins(r, total)) return;
      emit(total);
      return;
    }
    const Atom& pat = r.pos_body[idx];
    auto it = by_pred_.find(pat.predicate);
    if (it == by_pred_.end()) return;
    // candidates may grow behind the iteration; index loop keeps it valid
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      Subst saved = s;
      if (unify(pat, it->second[i], s)) join(r, idx + 1, s, emit);
      s = std::move(saved);
    }
  }

  // Evaluates builtins under s, binding variables through '=' where one side
  // is a single unbound variable and the other evaluates. Returns false when
  // any builtin fails, does not evaluate, or binds outside the universe.
  bool settle_builtins(const Rule& r, Subst& s) {
    std::vector<char> done(r.builtins.size(), 0);
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t i = 0; i < r.builtins.size(); ++i) {
        if (done[i]) continue;
        Builtin b = substitute(r.builtins[i], s);
        if (is_ground_expr(b.lhs) && is_ground_expr(b.rhs)) {
          if (eval_builtin(b) != Tri::True) return false;
          done[i] = 1;
          progress = true;
          continue;
        }
        if (b.op != CmpOp::Eq) continue;
        if (try_bind(b.lhs, b.rhs, s) || try_bind(b.rhs, b.lhs, s)) progress = true;
      }
    }
    for (char d : done)
      if (!d) return false;
    return true;
  }

  static bool is_ground_expr(const ArithExpr& e) {
    for (const auto& en : e.terms)
      if (en.term.is_variable()) return false;
    return true;
  }

  bool try_bind(const ArithExpr& var_side, const ArithExpr& val_side, Subst& s) {
    if (!(var_side.terms.size() == 1 && !var_side.terms[0].minus &&
          var_side.terms[0].term.is_variable()))
      return false;
    if (!is_ground_expr(val_side)) return false;
    SideValue v = eval_side(val_side);
    Term bound;
    if (v.kind == SideValue::Int)
      bound = Term::integer(static_cast<std::int32_t>(v.num));
    else if (v.kind == SideValue::Sym)
      bound = Term::constant(v.sym);
    else
      return false;
    if (!universe_.count(bound)) return false;  // arithmetic never extends the universe
    s[var_side.terms[0].term.name] = bound;
    return true;
  }

  std::optional<Rule> instantiate_checked(const Rule& r, const Subst& s) {
    std::optional<Rule> inst = instantiate(r, s);
    if (!inst) return std::nullopt;
    if (!inst->is_ground()) return std::nullopt;  // residual variable never bound
    return inst;
  }

  const Program& prog_;
  const std::set<Term>& universe_;
  std::set<Atom> derived_;
  std::map<std::string, std::vector<Atom>> by_pred_;
};

}  // namespace

Program expand_ranges(const Program& p) {
  Program out;
  for (const Rule& r : p.rules) {
    if (r.is_fact() && has_range(*r.head)) {
      for (const Term& t : r.head->args)
        if (t.is_range() && t.value > t.hi)
          throw ground_error("empty range " + to_string(t) + " in fact " + to_string(*r.head));
      Atom acc;
      acc.predicate = r.head->predicate;
      expand_fact_args(*r.head, 0, acc, out);
    } else if (rule_has_range(r)) {
      throw ground_error("range term outside a fact: " + to_string(r));
    } else {
      out.rules.push_back(r);
    }
  }
  return out;
}

std::set<Term> herbrand_universe(const Program& p) {
  std::set<Term> u;
  auto add_term = [&](const Term& t) {
    if (t.is_integer() || t.is_constant()) u.insert(t);
  };
  auto add_atom = [&](const Atom& a) {
    for (const Term& t : a.args) add_term(t);
  };
  for (const Rule& r : p.rules) {
    if (r.head) add_atom(*r.head);
    for (const Atom& a : r.pos_body) add_atom(a);
    for (const Atom& a : r.neg_body) add_atom(a);
    for (const Builtin& b : r.builtins) {
      for (const auto& en : b.lhs.terms) add_term(en.term);
      for (const auto& en : b.rhs.terms) add_term(en.term);
    }
  }
  return u;
}

Program ground(const Program& p0) {
  Program p = expand_ranges(p0);
  check_safety(p);
  std::set<Term> uni = herbrand_universe(p);
  std::vector<Term> u(uni.begin(), uni.end());
  Program out;
  for (const Rule& r : p.rules) {
    std::vector<std::string> vars = variables_of(r);
    if (vars.empty()) {
      if (std::optional<Rule> inst = instantiate(r, {})) out.rules.push_back(std::move(*inst));
      continue;
    }
    if (u.empty()) continue;
    std::vector<std::size_t> odo(vars.size(), 0);
    for (;;) {
      Subst s;
      for (std::size_t i = 0; i < vars.size(); ++i) s[vars[i]] = u[odo[i]];
      if (std::optional<Rule> inst = instantiate(r, s)) out.rules.push_back(std::move(*inst));
      std::size_t k = vars.size();
      while (k > 0) {
        --k;
        if (++odo[k] < u.size()) break;
        odo[k] = 0;
        if (k == 0) goto next_rule;
      }
    }
  next_rule:;
  }
  return out;
}

namespace detail {

bool ground_builtin_holds(const Builtin& b) { return eval_builtin(b) == Tri::True; }

Program relevant_ground(const Program& p0) {
  Program p = expand_ranges(p0);
  check_safety(p);
  std::set<Term> uni = herbrand_universe(p);
  return RelevantGrounder(p, uni).run();
}

}  // namespace detail

}  // namespace muasp::asp
