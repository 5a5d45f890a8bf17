#include "muasp/asp/solver.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <string>

#include "muasp/asp/grounder.hpp"

namespace muasp::asp {

namespace detail {

Program rewrite_constraints(const Program& gp) {
  Program out;
  int k = 0;
  for (const Rule& r : gp.rules) {
    if (!r.is_constraint()) {
      out.rules.push_back(r);
      continue;
    }
    Rule rw = r;
    Atom fresh;
    fresh.predicate = "__c" + std::to_string(k++);
    rw.head = fresh;
    rw.neg_body.insert(rw.neg_body.begin(), fresh);
    out.rules.push_back(std::move(rw));
  }
  return out;
}

}  // namespace detail

namespace {

bool builtins_hold(const Rule& r) {
  for (const Builtin& b : r.builtins)
    if (!detail::ground_builtin_holds(b)) return false;
  return true;
}

bool constraint_violated(const Rule& r, const std::set<Atom>& i) {
  if (!builtins_hold(r)) return false;
  for (const Atom& a : r.pos_body)
    if (!i.count(a)) return false;
  for (const Atom& a : r.neg_body)
    if (i.count(a)) return false;
  return true;
}

// Interned ground program and the backtracking search over it.
class Search {
 public:
  explicit Search(const Program& gp) {
    std::set<Atom> atom_set;
    auto note = [&](const Atom& a) { atom_set.insert(a); };
    for (const Rule& r : gp.rules) {
      if (r.head) note(*r.head);
      for (const Atom& a : r.pos_body) note(a);
      for (const Atom& a : r.neg_body) note(a);
    }
    atoms_.assign(atom_set.begin(), atom_set.end());  // canonical id order
    std::map<Atom, int> id;
    for (int i = 0; i < static_cast<int>(atoms_.size()); ++i) id[atoms_[i]] = i;

    for (const Rule& r : gp.rules) {
      if (!builtins_hold(r)) continue;  // ground programs normally carry none
      IRule ir;
      ir.head = id.at(*r.head);  // constraints were rewritten before interning
      for (const Atom& a : r.pos_body) ir.pos.push_back(id.at(a));
      for (const Atom& a : r.neg_body) ir.neg.push_back(id.at(a));
      rules_.push_back(std::move(ir));
    }
    int n = static_cast<int>(atoms_.size());
    occ_pos_.resize(n);
    occ_neg_.resize(n);
    for (int ri = 0; ri < static_cast<int>(rules_.size()); ++ri) {
      for (int a : rules_[ri].pos) occ_pos_[a].push_back(ri);
      for (int a : rules_[ri].neg) occ_neg_[a].push_back(ri);
    }
  }

  std::vector<std::set<Atom>> run() {
    State st;
    int n = static_cast<int>(atoms_.size());
    st.val.assign(n, -1);
    st.supp.assign(n, 0);
    st.alive.assign(rules_.size(), 1);
    st.pos_rem.resize(rules_.size());
    st.neg_rem.resize(rules_.size());
    for (std::size_t ri = 0; ri < rules_.size(); ++ri) {
      st.pos_rem[ri] = static_cast<int>(rules_[ri].pos.size());
      st.neg_rem[ri] = static_cast<int>(rules_[ri].neg.size());
      ++st.supp[rules_[ri].head];
    }
    std::vector<int> queue;
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      if (st.supp[a] == 0) ok = set_val(st, a, 0, queue);
    for (std::size_t ri = 0; ri < rules_.size() && ok; ++ri)
      if (st.pos_rem[ri] == 0 && st.neg_rem[ri] == 0)
        ok = set_val(st, rules_[ri].head, 1, queue);
    if (ok && propagate(st, queue)) dfs(st);
    return std::move(found_);
  }

 private:
  struct IRule {
    int head = -1;
    std::vector<int> pos, neg;
  };
  struct State {
    std::vector<std::int8_t> val;  // -1 open, 0 false, 1 true
    std::vector<int> pos_rem, neg_rem, supp;
    std::vector<char> alive;
  };

  static bool set_val(State& st, int a, std::int8_t v, std::vector<int>& queue) {
    if (st.val[a] != -1) return st.val[a] == v;
    st.val[a] = v;
    queue.push_back(a);
    return true;
  }

  bool propagate(State& st, std::vector<int>& queue) {
    while (!queue.empty()) {
      int a = queue.back();
      queue.pop_back();
      std::int8_t v = st.val[a];
      if (v == 1) {
        for (int ri : occ_pos_[a]) {
          if (--st.pos_rem[ri] == 0 && st.neg_rem[ri] == 0 && st.alive[ri])
            if (!set_val(st, rules_[ri].head, 1, queue)) return false;
        }
        for (int ri : occ_neg_[a])
          if (!kill(st, ri, queue)) return false;
      } else {
        for (int ri : occ_pos_[a])
          if (!kill(st, ri, queue)) return false;
        for (int ri : occ_neg_[a]) {
          if (--st.neg_rem[ri] == 0 && st.pos_rem[ri] == 0 && st.alive[ri])
            if (!set_val(st, rules_[ri].head, 1, queue)) return false;
        }
      }
    }
    return true;
  }

  bool kill(State& st, int ri, std::vector<int>& queue) {
    if (!st.alive[ri]) return true;
    st.alive[ri] = 0;
    int h = rules_[ri].head;
    if (--st.supp[h] == 0)
      if (!set_val(st, h, 0, queue)) return false;
    return true;
  }

  void dfs(const State& st) {
    int n = static_cast<int>(atoms_.size());
    int open = -1;
    for (int a = 0; a < n; ++a)
      if (st.val[a] == -1) {
        open = a;
        break;
      }
    if (open == -1) {
      if (stable(st)) {
        std::set<Atom> m;
        for (int a = 0; a < n; ++a)
          if (st.val[a] == 1) m.insert(atoms_[a]);
        found_.push_back(std::move(m));
      }
      return;
    }
    for (std::int8_t v : {std::int8_t{0}, std::int8_t{1}}) {
      State child = st;
      std::vector<int> queue;
      if (set_val(child, open, v, queue) && propagate(child, queue)) dfs(child);
    }
  }

  // Candidate equals the least model of its reduct.
  bool stable(const State& st) const {
    int n = static_cast<int>(atoms_.size());
    std::vector<char> in_lm(n, 0);
    std::vector<int> rem(rules_.size());
    std::vector<int> queue;
    std::vector<std::vector<int>> watch(n);
    for (std::size_t ri = 0; ri < rules_.size(); ++ri) {
      bool blocked = false;
      for (int a : rules_[ri].neg)
        if (st.val[a] == 1) {
          blocked = true;
          break;
        }
      if (blocked) {
        rem[ri] = -1;
        continue;
      }
      rem[ri] = static_cast<int>(rules_[ri].pos.size());
      for (int a : rules_[ri].pos) watch[a].push_back(static_cast<int>(ri));
      if (rem[ri] == 0 && !in_lm[rules_[ri].head]) {
        in_lm[rules_[ri].head] = 1;
        queue.push_back(rules_[ri].head);
      }
    }
    while (!queue.empty()) {
      int a = queue.back();
      queue.pop_back();
      for (int ri : watch[a])
        if (rem[ri] > 0 && --rem[ri] == 0 && !in_lm[rules_[ri].head]) {
          in_lm[rules_[ri].head] = 1;
          queue.push_back(rules_[ri].head);
        }
    }
    for (int a = 0; a < n; ++a)
      if (in_lm[a] != (st.val[a] == 1)) return false;
    return true;
  }

  std::vector<Atom> atoms_;
  std::vector<IRule> rules_;
  std::vector<std::vector<int>> occ_pos_, occ_neg_;
  std::vector<std::set<Atom>> found_;
};

}  // namespace

Program reduct(const Program& gp, const std::set<Atom>& i) {
  Program rw = detail::rewrite_constraints(gp);
  Program out;
  for (const Rule& r : rw.rules) {
    if (!builtins_hold(r)) continue;
    bool blocked = false;
    for (const Atom& a : r.neg_body)
      if (i.count(a)) {
        blocked = true;
        break;
      }
    if (blocked) continue;
    Rule d;
    d.head = r.head;
    d.pos_body = r.pos_body;
    out.rules.push_back(std::move(d));
  }
  return out;
}

std::set<Atom> least_model(const Program& dp) {
  for (const Rule& r : dp.rules) {
    if (r.is_constraint()) throw error("least_model: constraint in definite program");
    if (!r.neg_body.empty()) throw error("least_model: negation in definite program");
  }
  std::set<Atom> m;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const Rule& r : dp.rules) {
      if (!builtins_hold(r)) continue;
      bool fires = true;
      for (const Atom& a : r.pos_body)
        if (!m.count(a)) {
          fires = false;
          break;
        }
      if (fires && m.insert(*r.head).second) grew = true;
    }
  }
  return m;
}

bool is_answer_set(const Program& gp, const std::set<Atom>& i) {
  if (least_model(reduct(gp, i)) != i) return false;
  for (const Rule& r : gp.rules)
    if (r.is_constraint() && constraint_violated(r, i)) return false;
  return true;
}

std::vector<AnswerSet> solve(const Program& p) {
  Program gp = detail::relevant_ground(p);
  Program rw = detail::rewrite_constraints(gp);
  Search search(rw);
  std::vector<std::set<Atom>> models = search.run();
  std::vector<AnswerSet> out;
  out.reserve(models.size());
  for (auto& m : models) out.push_back(AnswerSet{std::move(m)});
  std::sort(out.begin(), out.end());
  return out;
}

bool is_consistent(const Program& p) { return !solve(p).empty(); }

}  // namespace muasp::asp
