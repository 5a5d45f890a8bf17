#pragma once

#include <optional>
#include <string>
#include <vector>

#include "muasp/asp/ast.hpp"
#include "muasp/asp/errors.hpp"

namespace muasp::asp {

// The five query modes over a program's answer sets. POSSIBLE is kept as a
// separate surface form although it coincides with BRAVE.
enum class QueryMode { BRAVE, NAF_SOME, POSSIBLE, KNOWN, NOT_ALL };

struct Query {
  QueryMode mode = QueryMode::BRAVE;
  Atom atom;  // must be ground
  auto operator<=>(const Query&) const = default;
};

struct QueryResult {
  Query query;
  bool value = false;
  auto operator<=>(const QueryResult&) const = default;
};

// Raised when a query is evaluated against an inconsistent program (no
// answer sets); the shell layer turns this into a failure message.
class inconsistency_error : public error {
 public:
  inconsistency_error() : error("no answer sets: program is inconsistent") {}
};

// BRAVE/POSSIBLE: a holds in some answer set. NAF_SOME: a fails in some.
// KNOWN: a holds in all. NOT_ALL: a fails in all. Throws
// inconsistency_error on an empty list and muasp::error on a non-ground
// atom.
bool eval_query(QueryMode mode, const Atom& a, const std::vector<AnswerSet>& answer_sets);

// Surface spellings used in descriptor files and the CLI:
// brave, some-not, M, K, NOT.
const char* to_string(QueryMode m);
std::optional<QueryMode> query_mode_from(const std::string& name);

std::string to_string(const Query& q);
std::string to_string(const QueryResult& r);

}  // namespace muasp::asp
