// Text syntax for the three formula languages.
//
// Tokens: `~` `&` `|` `->` `/` `(` `)` `{` `}` `,` `.`, the keywords
// `forall` `exists` `in` `true`, and identifiers over [A-Za-z0-9_].
// Precedence, tightest first: `~` and `/`, `&`, `|`, `->`. `&` and `|`
// associate left, `->` right. Quantifier scope extends as far right as
// possible. The left operand of `/` is an atom or a parenthesized formula;
// its right operand is a unary formula, so `p/q & r` is `(p/q) & r` and
// `~p/q` is `~(p/q)`. See docs/grammar.ebnf.

#pragma once

#include <cctype>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "presup/formulas.hpp"

namespace presup {

struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, std::string message, std::vector<std::string> expected = {})
      : std::runtime_error(describe(span, message, expected)),
        span_(span),
        message_(std::move(message)),
        expected_(std::move(expected)) {}

  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string describe(SourceSpan span, const std::string& message,
                              const std::vector<std::string>& expected) {
    std::string s = "parse error at " + std::to_string(span.start) + ": " + message;
    if (!expected.empty()) {
      s += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) s += i + 1 == expected.size() ? " or " : ", ";
        s += expected[i];
      }
      s += ")";
    }
    return s;
  }

  SourceSpan span_;
  std::string message_;
  std::vector<std::string> expected_;
};

namespace detail {

enum class Tok {
  ident,
  kw_forall,
  kw_exists,
  kw_in,
  kw_true,
  tilde,
  amp,
  bar,
  arrow,
  slash,
  lparen,
  rparen,
  lbrace,
  rbrace,
  comma,
  dot,
  end,
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::kw_forall: return "'forall'";
    case Tok::kw_exists: return "'exists'";
    case Tok::kw_in: return "'in'";
    case Tok::kw_true: return "'true'";
    case Tok::tilde: return "'~'";
    case Tok::amp: return "'&'";
    case Tok::bar: return "'|'";
    case Tok::arrow: return "'->'";
    case Tok::slash: return "'/'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::comma: return "','";
    case Tok::dot: return "'.'";
    case Tok::end: return "end of input";
  }
  return "?";
}

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    auto single = [&](Tok t) {
      out.push_back({t, std::string(1, c), {start, start + 1}});
      ++i;
    };
    switch (c) {
      case '~': single(Tok::tilde); continue;
      case '&': single(Tok::amp); continue;
      case '|': single(Tok::bar); continue;
      case '/': single(Tok::slash); continue;
      case '(': single(Tok::lparen); continue;
      case ')': single(Tok::rparen); continue;
      case '{': single(Tok::lbrace); continue;
      case '}': single(Tok::rbrace); continue;
      case ',': single(Tok::comma); continue;
      case '.': single(Tok::dot); continue;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          out.push_back({Tok::arrow, "->", {start, start + 2}});
          i += 2;
          continue;
        }
        throw ParseError({start, start + 1}, "unexpected '-'", {"'->'"});
      default:
        break;
    }
    if (!ident_char(c)) {
      // Extend the span over a whole UTF-8 sequence.
      std::size_t j = i + 1;
      while (j < text.size() && (static_cast<unsigned char>(text[j]) & 0xC0) == 0x80) ++j;
      throw ParseError({start, j}, "unexpected character '" +
                                       std::string(text.substr(start, j - start)) + "'");
    }
    while (i < text.size() && ident_char(text[i])) ++i;
    std::string word(text.substr(start, i - start));
    Tok kind = Tok::ident;
    if (word == "forall") kind = Tok::kw_forall;
    else if (word == "exists") kind = Tok::kw_exists;
    else if (word == "in") kind = Tok::kw_in;
    else if (word == "true") kind = Tok::kw_true;
    out.push_back({kind, std::move(word), {start, i}});
  }
  out.push_back({Tok::end, "", {text.size(), text.size()}});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, Lang lang) : tokens_(tokenize(text)), lang_(lang) {}

  NodePtr parse() {
    NodePtr f = formula();
    expect(Tok::end);
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  bool accept(Tok t) {
    if (peek().kind != t) return false;
    ++pos_;
    return true;
  }

  const Token& expect(Tok t) {
    if (peek().kind != t) fail(std::string("unexpected ") + describe(peek().kind), {describe(t)});
    return advance();
  }

  [[noreturn]] void fail(std::string message, std::vector<std::string> expected = {}) const {
    throw ParseError(peek().span, std::move(message), std::move(expected));
  }

  NodePtr formula() {
    NodePtr lhs = disjunction();
    if (accept(Tok::arrow)) return make({Op::implication, {}, {}, lhs, formula(), {}});
    return lhs;
  }

  NodePtr disjunction() {
    NodePtr lhs = conjunction();
    while (accept(Tok::bar)) lhs = make({Op::disjunction, {}, {}, lhs, conjunction(), {}});
    return lhs;
  }

  NodePtr conjunction() {
    NodePtr lhs = unary();
    while (accept(Tok::amp)) lhs = make({Op::conjunction, {}, {}, lhs, unary(), {}});
    return lhs;
  }

  NodePtr unary() {
    if (accept(Tok::tilde)) return make({Op::negation, {}, {}, unary(), nullptr, {}});
    if (peek().kind == Tok::kw_forall || peek().kind == Tok::kw_exists) {
      Op op = advance().kind == Tok::kw_forall ? Op::forall : Op::exists;
      std::string var = expect(Tok::ident).text;
      expect(Tok::dot);
      bound_.push_back(var);
      NodePtr body = formula();
      bound_.pop_back();
      return make({op, var, {}, nullptr, body, {}});
    }
    return slash();
  }

  NodePtr slash() {
    NodePtr lhs = primary();
    if (peek().kind != Tok::slash) return lhs;
    if (lang_ != Lang::pre)
      fail(lang_ == Lang::base
               ? "presupposition connective '/' is not allowed in first-order formulas"
               : "presupposition connective '/' is not allowed in contextual formulas");
    SourceSpan at = peek().span;
    advance();
    if (!belongs_to(lhs, Lang::base))
      throw ParseError(at, "left argument of '/' must be first-order");
    return make({Op::presupposition, {}, {}, lhs, unary(), {}});
  }

  NodePtr primary() {
    switch (peek().kind) {
      case Tok::lparen: {
        advance();
        NodePtr f = formula();
        expect(Tok::rparen);
        return f;
      }
      case Tok::kw_true:
        if (lang_ != Lang::con) fail("'true' is only allowed in contextual formulas");
        advance();
        return make({Op::top, {}, {}, nullptr, nullptr, {}});
      case Tok::kw_in:
        if (lang_ != Lang::con) fail("'in' is only allowed in contextual formulas");
        return in_formula();
      case Tok::ident:
        return atom();
      default:
        fail(std::string("unexpected ") + describe(peek().kind),
             {"identifier", "'('", "'~'", "'forall'", "'exists'"});
    }
  }

  NodePtr in_formula() {
    expect(Tok::kw_in);
    expect(Tok::lparen);
    expect(Tok::lbrace);
    std::vector<NodePtr> members;
    if (peek().kind != Tok::rbrace) {
      Lang saved = lang_;
      lang_ = Lang::base;
      do {
        NodePtr m = formula();
        bool duplicate = false;
        for (const auto& existing : members)
          if (alpha_eq(existing, m)) duplicate = true;
        if (!duplicate) members.push_back(m);
      } while (accept(Tok::comma));
      lang_ = saved;
    }
    expect(Tok::rbrace);
    expect(Tok::comma);
    NodePtr body = formula();
    expect(Tok::rparen);
    return make({Op::in, {}, {}, nullptr, body, std::move(members)});
  }

  NodePtr atom() {
    std::string name = advance().text;
    std::vector<Term> args;
    if (accept(Tok::lparen)) {
      do args.push_back(term());
      while (accept(Tok::comma));
      expect(Tok::rparen);
    }
    return make({Op::atom, std::move(name), std::move(args), nullptr, nullptr, {}});
  }

  Term term() {
    if (peek().kind != Tok::ident) fail(std::string("unexpected ") + describe(peek().kind), {"term"});
    std::string name = advance().text;
    if (accept(Tok::lparen)) {
      std::vector<Term> args;
      do args.push_back(term());
      while (accept(Tok::comma));
      expect(Tok::rparen);
      return Term::application(std::move(name), std::move(args));
    }
    for (const auto& b : bound_)
      if (b == name) return Term::variable(std::move(name));
    if (std::isupper(static_cast<unsigned char>(name[0]))) return Term::variable(std::move(name));
    return Term::constant(std::move(name));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Lang lang_;
  std::vector<std::string> bound_;
};

}  // namespace detail

template <Lang L>
Formula<L> parse(std::string_view text) {
  return Formula<L>::from_node(detail::Parser(text, L).parse());
}

inline LFormula parse_l(std::string_view text) { return parse<Lang::base>(text); }
inline PreFormula parse_pre(std::string_view text) { return parse<Lang::pre>(text); }
inline ConFormula parse_con(std::string_view text) { return parse<Lang::con>(text); }

// ---------------------------------------------------------------------------
// Rendering

inline std::string render(const Term& t) {
  if (t.kind() != Term::Kind::application) return t.name();
  std::string s = t.name() + "(";
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) s += ", ";
    s += render(t.args()[i]);
  }
  return s + ")";
}

namespace detail {

// Binding strength: 0 `->`, 1 `|`, 2 `&`, 3 unary, 4 primary.
inline int level(Op op) {
  switch (op) {
    case Op::implication: return 0;
    case Op::disjunction: return 1;
    case Op::conjunction: return 2;
    case Op::negation:
    case Op::forall:
    case Op::exists:
    case Op::presupposition: return 3;
    default: return 4;
  }
}

// `open_ok` is false when more tokens follow at the same nesting depth, in
// which case a quantifier would swallow them and must be parenthesized.
inline void render(const NodePtr& n, int min_level, bool open_ok, std::string& out) {
  bool parens = level(n->op) < min_level || (is_quantifier(n->op) && !open_ok);
  if (parens) {
    out += '(';
    open_ok = true;
  }
  switch (n->op) {
    case Op::atom:
      out += n->name;
      if (!n->args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < n->args.size(); ++i) {
          if (i) out += ", ";
          out += presup::render(n->args[i]);
        }
        out += ')';
      }
      break;
    case Op::top:
      out += "true";
      break;
    case Op::negation:
      out += '~';
      render(n->lhs, 3, open_ok, out);
      break;
    case Op::implication:
      render(n->lhs, 1, false, out);
      out += " -> ";
      render(n->rhs, 0, open_ok, out);
      break;
    case Op::disjunction:
      render(n->lhs, 1, false, out);
      out += " | ";
      render(n->rhs, 2, open_ok, out);
      break;
    case Op::conjunction:
      render(n->lhs, 2, false, out);
      out += " & ";
      render(n->rhs, 3, open_ok, out);
      break;
    case Op::forall:
    case Op::exists:
      out += n->op == Op::forall ? "forall " : "exists ";
      out += n->name;
      out += ". ";
      render(n->rhs, 0, true, out);
      break;
    case Op::presupposition:
      render(n->lhs, 4, false, out);
      out += '/';
      render(n->rhs, 3, open_ok, out);
      break;
    case Op::in:
      out += "in({";
      for (std::size_t i = 0; i < n->context.size(); ++i) {
        if (i) out += ", ";
        render(n->context[i], 0, true, out);
      }
      out += "}, ";
      render(n->rhs, 0, true, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace detail

template <Lang L>
std::string render(const Formula<L>& f) {
  std::string out;
  detail::render(f.node(), 0, true, out);
  return out;
}

inline std::string render(const Context& c) {
  std::string out = "{";
  bool first = true;
  for (const auto& m : c) {
    if (!first) out += ", ";
    first = false;
    out += render(m);
  }
  return out + "}";
}

}  // namespace presup
