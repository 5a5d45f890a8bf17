#include "muasp/asp/query.hpp"

namespace muasp::asp {

bool eval_query(QueryMode mode, const Atom& a, const std::vector<AnswerSet>& answer_sets) {
  if (!a.is_ground()) throw error("eval_query: non-ground query atom " + to_string(a));
  if (answer_sets.empty()) throw inconsistency_error();
  auto some = [&](bool in) {
    for (const AnswerSet& s : answer_sets)
      if (s.contains(a) == in) return true;
    return false;
  };
  switch (mode) {
    case QueryMode::BRAVE:
    case QueryMode::POSSIBLE:
      return some(true);
    case QueryMode::NAF_SOME:
      return some(false);
    case QueryMode::KNOWN:
      return !some(false);
    case QueryMode::NOT_ALL:
      return !some(true);
  }
  throw error("eval_query: bad mode");
}

const char* to_string(QueryMode m) {
  switch (m) {
    case QueryMode::BRAVE: return "brave";
    case QueryMode::NAF_SOME: return "some-not";
    case QueryMode::POSSIBLE: return "M";
    case QueryMode::KNOWN: return "K";
    case QueryMode::NOT_ALL: return "NOT";
  }
  return "?";
}

std::optional<QueryMode> query_mode_from(const std::string& name) {
  if (name == "brave") return QueryMode::BRAVE;
  if (name == "some-not") return QueryMode::NAF_SOME;
  if (name == "M") return QueryMode::POSSIBLE;
  if (name == "K") return QueryMode::KNOWN;
  if (name == "NOT") return QueryMode::NOT_ALL;
  return std::nullopt;
}

std::string to_string(const Query& q) {
  return std::string(to_string(q.mode)) + " " + to_string(q.atom);
}

std::string to_string(const QueryResult& r) {
  return to_string(r.query) + " = " + (r.value ? "true" : "false");
}

}  // namespace muasp::asp
