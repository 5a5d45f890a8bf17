#include "muasp/asp/ast.hpp"

#include <algorithm>
#include <sstream>

namespace muasp::asp {

bool Atom::is_ground() const {
    return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

bool Rule::is_ground() const {
    auto ground_atoms = [](const std::vector<Atom>& v) {
        return std::all_of(v.begin(), v.end(), [](const Atom& a) { return a.is_ground(); });
    };
    if (head && !head->is_ground()) return false;
    if (!ground_atoms(pos_body) || !ground_atoms(neg_body)) return false;
    for (const Builtin& b : builtins) {
        for (const auto& e : b.lhs.terms)
            if (!e.term.is_ground()) return false;
        for (const auto& e : b.rhs.terms)
            if (!e.term.is_ground()) return false;
    }
    return true;
}

const char* to_string(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

std::string to_string(const Term& t) {
    switch (t.kind) {
        case TermKind::Integer: return std::to_string(t.value);
        case TermKind::Constant:
        case TermKind::Variable: return t.name;
        case TermKind::Range: return std::to_string(t.value) + ".." + std::to_string(t.hi);
    }
    return {};
}

std::string to_string(const Atom& a) {
    if (a.args.empty()) return a.predicate;
    std::string out = a.predicate + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ",";
        out += to_string(a.args[i]);
    }
    out += ")";
    return out;
}

std::string to_string(const ArithExpr& e) {
    std::string out;
    for (std::size_t i = 0; i < e.terms.size(); ++i) {
        const auto& entry = e.terms[i];
        if (i == 0) {
            if (entry.minus) out += "-";
        } else {
            out += entry.minus ? " - " : " + ";
        }
        out += to_string(entry.term);
    }
    return out;
}

std::string to_string(const Builtin& b) {
    return to_string(b.lhs) + " " + to_string(b.op) + " " + to_string(b.rhs);
}

std::string to_string(const Rule& r) {
    std::string body;
    auto append = [&body](const std::string& s) {
        if (!body.empty()) body += ", ";
        body += s;
    };
    for (const Atom& a : r.pos_body) append(to_string(a));
    for (const Atom& a : r.neg_body) append("not " + to_string(a));
    for (const Builtin& b : r.builtins) append(to_string(b));

    if (!r.head) return ":- " + body + ".";
    if (body.empty()) return to_string(*r.head) + ".";
    return to_string(*r.head) + " :- " + body + ".";
}

std::string to_string(const Program& p) {
    std::string out;
    for (const Rule& r : p.rules) {
        out += to_string(r);
        out += "\n";
    }
    return out;
}

std::string to_string(const AnswerSet& s) {
    std::string out;
    for (const Atom& a : s.atoms) {
        if (!out.empty()) out += " ";
        out += to_string(a);
    }
    return out;
}

std::vector<std::string> variables_of(const Rule& r) {
    std::vector<std::string> vars;
    auto visit_term = [&vars](const Term& t) {
        if (t.is_variable() && std::find(vars.begin(), vars.end(), t.name) == vars.end())
            vars.push_back(t.name);
    };
    auto visit_atom = [&visit_term](const Atom& a) {
        for (const Term& t : a.args) visit_term(t);
    };
    if (r.head) visit_atom(*r.head);
    for (const Atom& a : r.pos_body) visit_atom(a);
    for (const Atom& a : r.neg_body) visit_atom(a);
    for (const Builtin& b : r.builtins) {
        for (const auto& e : b.lhs.terms) visit_term(e.term);
        for (const auto& e : b.rhs.terms) visit_term(e.term);
    }
    return vars;
}

bool is_reserved_atom(const Atom& a) {
    return a.predicate.rfind("__", 0) == 0;
}

}  // namespace muasp::asp
