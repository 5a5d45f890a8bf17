#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace muasp::asp {

// Flat term language: no function symbols. Ranges exist only between parsing
// and expand_ranges(); nothing downstream of range expansion ever sees one.
enum class TermKind { Integer, Constant, Variable, Range };

struct Term {
    TermKind kind = TermKind::Integer;
    std::int32_t value = 0;  // Integer payload; Range lower bound
    std::int32_t hi = 0;     // Range upper bound
    std::string name;        // Constant / Variable payload

    static Term integer(std::int32_t v) { return {TermKind::Integer, v, 0, {}}; }
    static Term constant(std::string n) { return {TermKind::Constant, 0, 0, std::move(n)}; }
    static Term variable(std::string n) { return {TermKind::Variable, 0, 0, std::move(n)}; }
    static Term range(std::int32_t lo, std::int32_t hi) { return {TermKind::Range, lo, hi, {}}; }

    bool is_integer() const { return kind == TermKind::Integer; }
    bool is_constant() const { return kind == TermKind::Constant; }
    bool is_variable() const { return kind == TermKind::Variable; }
    bool is_range() const { return kind == TermKind::Range; }
    bool is_ground() const { return kind == TermKind::Integer || kind == TermKind::Constant; }

    auto operator<=>(const Term&) const = default;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    std::size_t arity() const { return args.size(); }
    bool is_ground() const;

    // (predicate, args) lexicographic; this is the canonical atom order used
    // for enumeration and rendering everywhere.
    auto operator<=>(const Atom&) const = default;
};

struct Literal {
    Atom atom;
    bool negated = false;  // negation as failure; the language has no classical negation

    auto operator<=>(const Literal&) const = default;
};

// Sum of signed terms, e.g. X + 1 or T - 1. Sign of the first entry covers a
// leading minus.
struct ArithExpr {
    struct Entry {
        bool minus = false;
        Term term;
        auto operator<=>(const Entry&) const = default;
    };
    std::vector<Entry> terms;

    bool single_term() const { return terms.size() == 1 && !terms.front().minus; }

    auto operator<=>(const ArithExpr&) const = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct Builtin {
    CmpOp op = CmpOp::Eq;
    ArithExpr lhs, rhs;

    auto operator<=>(const Builtin&) const = default;
};

struct Rule {
    std::optional<Atom> head;  // nullopt: constraint
    std::vector<Atom> pos_body;
    std::vector<Atom> neg_body;
    std::vector<Builtin> builtins;

    bool is_constraint() const { return !head.has_value(); }
    bool is_fact() const {
        return head && pos_body.empty() && neg_body.empty() && builtins.empty();
    }
    bool is_ground() const;

    auto operator<=>(const Rule&) const = default;

    static Rule fact(Atom a) { return Rule{std::move(a), {}, {}, {}}; }
};

struct Program {
    std::vector<Rule> rules;  // source order preserved

    auto operator<=>(const Program&) const = default;
};

struct AnswerSet {
    std::set<Atom> atoms;  // ground atoms in canonical order

    bool contains(const Atom& a) const { return atoms.count(a) != 0; }
    std::size_t size() const { return atoms.size(); }

    auto operator<=>(const AnswerSet&) const = default;
};

const char* to_string(CmpOp op);
std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const ArithExpr& e);
std::string to_string(const Builtin& b);
std::string to_string(const Rule& r);
std::string to_string(const Program& p);
std::string to_string(const AnswerSet& s);  // atoms space-separated

// Variables occurring anywhere in the rule, in first-occurrence order.
std::vector<std::string> variables_of(const Rule& r);

// Atoms reserved by the toolchain (constraint rewriting) rather than written
// by a program author. The surface grammar cannot produce these names.
bool is_reserved_atom(const Atom& a);

}  // namespace muasp::asp
