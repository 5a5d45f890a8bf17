#include "muasp/asp/parser.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace muasp::asp {

namespace {

enum class Tok {
  Ident, Var, Int,
  LParen, RParen, Comma, Dot, DotDot, ColonDash,
  Not, Plus, Minus,
  Eq, Ne, Lt, Le, Gt, Ge,
  End
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Var: return "variable";
    case Tok::Int: return "integer";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::DotDot: return "'..'";
    case Tok::ColonDash: return "':-'";
    case Tok::Not: return "'not'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::End;
  std::string text;        // Ident/Var spelling
  std::int32_t value = 0;  // Int payload
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.col = col_;
    if (eof()) {
      t.kind = Tok::End;
      return t;
    }
    char c = peek();
    if (c == '(') { get(); t.kind = Tok::LParen; return t; }
    if (c == ')') { get(); t.kind = Tok::RParen; return t; }
    if (c == ',') { get(); t.kind = Tok::Comma; return t; }
    if (c == '+') { get(); t.kind = Tok::Plus; return t; }
    if (c == '-') { get(); t.kind = Tok::Minus; return t; }
    if (c == '.') {
      get();
      if (!eof() && peek() == '.') { get(); t.kind = Tok::DotDot; return t; }
      t.kind = Tok::Dot;
      return t;
    }
    if (c == ':') {
      get();
      if (!eof() && peek() == '-') { get(); t.kind = Tok::ColonDash; return t; }
      fail(t, "expected '-' after ':'");
    }
    if (c == '=') { get(); t.kind = Tok::Eq; return t; }
    if (c == '!') {
      get();
      if (!eof() && peek() == '=') { get(); t.kind = Tok::Ne; return t; }
      fail(t, "expected '=' after '!'");
    }
    if (c == '<') {
      get();
      if (!eof() && peek() == '=') { get(); t.kind = Tok::Le; return t; }
      t.kind = Tok::Lt;
      return t;
    }
    if (c == '>') {
      get();
      if (!eof() && peek() == '=') { get(); t.kind = Tok::Ge; return t; }
      t.kind = Tok::Gt;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) digits += get();
      std::int32_t v = 0;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (ec != std::errc{} || p != digits.data() + digits.size())
        fail(t, "integer literal out of range: " + digits);
      t.kind = Tok::Int;
      t.value = v;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '\\') {
      std::string name;
      while (!eof()) {
        char d = peek();
        if (d == '\\') {
          // tolerate an escaped underscore inside identifiers
          if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '_') {
            get();
            name += get();
            continue;
          }
          break;
        }
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
          name += get();
          continue;
        }
        break;
      }
      if (name.empty()) fail(t, "stray '\\'");
      if (name == "not") {
        t.kind = Tok::Not;
        return t;
      }
      char first = name[0];
      t.kind = (std::isupper(static_cast<unsigned char>(first)) || first == '_') ? Tok::Var : Tok::Ident;
      t.text = std::move(name);
      return t;
    }
    fail(t, std::string("unexpected character '") + c + "'");
    return t;  // unreachable
  }

 private:
  bool eof() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }
  char get() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip_ws() {
    while (!eof()) {
      char c = peek();
      if (c == '%') {
        while (!eof() && peek() != '\n') get();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        get();
      } else {
        break;
      }
    }
  }
  [[noreturn]] void fail(const Token& at, const std::string& msg) {
    throw parse_error(at.line, at.col, msg);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { advance(); }

  Program program() {
    Program p;
    while (cur_.kind != Tok::End) p.rules.push_back(rule());
    return p;
  }

  Atom single_atom(bool require_ground) {
    Atom a = atom();
    if (cur_.kind == Tok::Dot) advance();
    expect(Tok::End);
    if (require_ground && !a.is_ground())
      throw parse_error(1, 1, "expected a ground atom: " + to_string(a));
    return a;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  void expect(Tok k) {
    if (cur_.kind != k)
      throw parse_error(cur_.line, cur_.col,
                        std::string("expected ") + tok_name(k) + ", got " + tok_name(cur_.kind));
  }

  void eat(Tok k) {
    expect(k);
    advance();
  }

  Rule rule() {
    Token start = cur_;
    Rule r;
    if (cur_.kind == Tok::ColonDash) {
      advance();
      body_into(r);
    } else {
      r.head = atom();
      if (cur_.kind == Tok::ColonDash) {
        advance();
        body_into(r);
      }
    }
    eat(Tok::Dot);
    check_rule_safety(r, start.line, start.col);
    return r;
  }

  void body_into(Rule& r) {
    for (;;) {
      body_element(r);
      if (cur_.kind == Tok::Comma) {
        advance();
        continue;
      }
      break;
    }
  }

  static bool is_cmp(Tok k) {
    return k == Tok::Eq || k == Tok::Ne || k == Tok::Lt || k == Tok::Le || k == Tok::Gt ||
           k == Tok::Ge;
  }
  static bool is_arith(Tok k) { return k == Tok::Plus || k == Tok::Minus; }

  void body_element(Rule& r) {
    if (cur_.kind == Tok::Not) {
      advance();
      r.neg_body.push_back(atom());
      return;
    }
    if (cur_.kind == Tok::Var || cur_.kind == Tok::Int || cur_.kind == Tok::Minus) {
      r.builtins.push_back(builtin());
      return;
    }
    expect(Tok::Ident);
    Token id = cur_;
    Atom a = atom();
    if (a.args.empty() && (is_cmp(cur_.kind) || is_arith(cur_.kind))) {
      // a bare constant starting a comparison, not an atom
      ArithExpr lhs;
      lhs.terms.push_back({false, Term::constant(id.text)});
      extend_expr(lhs);
      r.builtins.push_back(finish_builtin(std::move(lhs)));
      return;
    }
    r.pos_body.push_back(std::move(a));
  }

  Atom atom() {
    expect(Tok::Ident);
    Atom a;
    a.predicate = cur_.text;
    advance();
    if (cur_.kind == Tok::LParen) {
      advance();
      for (;;) {
        a.args.push_back(arg_term());
        if (cur_.kind == Tok::Comma) {
          advance();
          continue;
        }
        break;
      }
      eat(Tok::RParen);
    }
    return a;
  }

  Term arg_term() {
    if (cur_.kind == Tok::Minus) {
      advance();
      expect(Tok::Int);
      Term t = Term::integer(negate(cur_));
      advance();
      return t;
    }
    if (cur_.kind == Tok::Int) {
      std::int32_t lo = cur_.value;
      advance();
      if (cur_.kind == Tok::DotDot) {
        advance();
        std::int32_t hi;
        if (cur_.kind == Tok::Minus) {
          advance();
          expect(Tok::Int);
          hi = negate(cur_);
        } else {
          expect(Tok::Int);
          hi = cur_.value;
        }
        advance();
        return Term::range(lo, hi);
      }
      return Term::integer(lo);
    }
    if (cur_.kind == Tok::Ident) {
      Term t = Term::constant(cur_.text);
      advance();
      return t;
    }
    if (cur_.kind == Tok::Var) {
      Term t = Term::variable(cur_.text);
      advance();
      return t;
    }
    throw parse_error(cur_.line, cur_.col,
                      std::string("expected a term, got ") + tok_name(cur_.kind));
  }

  std::int32_t negate(const Token& intTok) {
    std::int64_t v = -static_cast<std::int64_t>(intTok.value);
    if (v < INT32_MIN)
      throw parse_error(intTok.line, intTok.col, "integer literal out of range");
    return static_cast<std::int32_t>(v);
  }

  Term expr_operand() {
    if (cur_.kind == Tok::Int) {
      Term t = Term::integer(cur_.value);
      advance();
      return t;
    }
    if (cur_.kind == Tok::Ident) {
      Term t = Term::constant(cur_.text);
      advance();
      return t;
    }
    if (cur_.kind == Tok::Var) {
      Term t = Term::variable(cur_.text);
      advance();
      return t;
    }
    throw parse_error(cur_.line, cur_.col,
                      std::string("expected an operand, got ") + tok_name(cur_.kind));
  }

  ArithExpr expr() {
    ArithExpr e;
    bool neg = false;
    if (cur_.kind == Tok::Minus) {
      advance();
      neg = true;
    }
    e.terms.push_back({neg, expr_operand()});
    extend_expr(e);
    return e;
  }

  void extend_expr(ArithExpr& e) {
    while (is_arith(cur_.kind)) {
      bool neg = cur_.kind == Tok::Minus;
      advance();
      e.terms.push_back({neg, expr_operand()});
    }
  }

  Builtin finish_builtin(ArithExpr lhs) {
    CmpOp op;
    switch (cur_.kind) {
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Ne: op = CmpOp::Ne; break;
      case Tok::Lt: op = CmpOp::Lt; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Gt: op = CmpOp::Gt; break;
      case Tok::Ge: op = CmpOp::Ge; break;
      default:
        throw parse_error(cur_.line, cur_.col,
                          std::string("expected a comparison operator, got ") + tok_name(cur_.kind));
    }
    advance();
    Builtin b;
    b.op = op;
    b.lhs = std::move(lhs);
    b.rhs = expr();
    return b;
  }

  Builtin builtin() { return finish_builtin(expr()); }

  void check_rule_safety(const Rule& r, int line, int col) {
    try {
      check_one_rule(r);
    } catch (const ground_error& e) {
      throw parse_error(line, col, e.what());
    }
  }

  Lexer lex_;
  Token cur_;

 public:
  // shared with check_safety()
  static void check_one_rule(const Rule& r) {
    std::set<std::string> bound;
    for (const Atom& a : r.pos_body)
      for (const Term& t : a.args)
        if (t.is_variable()) bound.insert(t.name);

    auto side_vars_bound = [&](const ArithExpr& e) {
      for (const auto& en : e.terms)
        if (en.term.is_variable() && !bound.count(en.term.name)) return false;
      return true;
    };
    auto bindable_var = [](const ArithExpr& e) -> const std::string* {
      if (e.terms.size() == 1 && !e.terms[0].minus && e.terms[0].term.is_variable())
        return &e.terms[0].term.name;
      return nullptr;
    };

    // X = expr binds X once expr's variables are all bound
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Builtin& b : r.builtins) {
        if (b.op != CmpOp::Eq) continue;
        if (const std::string* v = bindable_var(b.lhs);
            v && !bound.count(*v) && side_vars_bound(b.rhs)) {
          bound.insert(*v);
          changed = true;
        }
        if (const std::string* v = bindable_var(b.rhs);
            v && !bound.count(*v) && side_vars_bound(b.lhs)) {
          bound.insert(*v);
          changed = true;
        }
      }
    }

    auto require = [&](const std::string& v, const Rule& in) {
      if (!bound.count(v))
        throw ground_error("unsafe variable " + v + " in rule: " + to_string(in));
    };
    if (r.head)
      for (const Term& t : r.head->args)
        if (t.is_variable()) require(t.name, r);
    for (const Atom& a : r.neg_body)
      for (const Term& t : a.args)
        if (t.is_variable()) require(t.name, r);
    for (const Builtin& b : r.builtins) {
      for (const auto& en : b.lhs.terms)
        if (en.term.is_variable()) require(en.term.name, r);
      for (const auto& en : b.rhs.terms)
        if (en.term.is_variable()) require(en.term.name, r);
    }
  }
};

}  // namespace

Program parse_program(std::string_view text) {
  Parser p(text);
  return p.program();
}

Atom parse_atom(std::string_view text) {
  Parser p(text);
  return p.single_atom(false);
}

Atom parse_ground_atom(std::string_view text) {
  Parser p(text);
  return p.single_atom(true);
}

void check_safety(const Program& p) {
  for (const Rule& r : p.rules) Parser::check_one_rule(r);
}

}  // namespace muasp::asp
