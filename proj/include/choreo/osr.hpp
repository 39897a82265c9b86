#pragma once

// Offering selection rules: comparisons over flattened non-functional
// properties, composed with AND and OR.
//
// Canonical text grammar (also the persisted query form):
//
//   expr       := term ("OR" term)*
//   term       := factor ("AND" factor)*
//   factor     := "(" expr ")" | comparison
//   comparison := path op literal
//   path       := ident ("." ident)*
//   op         := "=" | "!=" | "<" | "<=" | ">" | ">="
//   literal    := quoted-string | decimal-number | "true" | "false"
//
// Keywords are case-sensitive uppercase, whitespace is insignificant, and
// the empty string denotes the empty conjunction (always true).

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "choreo/core.hpp"

namespace choreo {

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

inline const char* to_text(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "=";
}

struct OsrExpr {
  enum class Kind { Comparison, And, Or };

  Kind kind = Kind::And;
  // Comparison only.
  std::string path;
  CompareOp op = CompareOp::Eq;
  json literal;  // string | number | boolean
  // And / Or only. And({}) is always true, Or({}) always false.
  std::vector<OsrExpr> children;

  static OsrExpr comparison(std::string path, CompareOp op, json literal) {
    OsrExpr e;
    e.kind = Kind::Comparison;
    e.path = std::move(path);
    e.op = op;
    e.literal = std::move(literal);
    return e;
  }
  static OsrExpr all_of(std::vector<OsrExpr> children) {
    OsrExpr e;
    e.kind = Kind::And;
    e.children = std::move(children);
    return e;
  }
  static OsrExpr any_of(std::vector<OsrExpr> children) {
    OsrExpr e;
    e.kind = Kind::Or;
    e.children = std::move(children);
    return e;
  }
  static OsrExpr always_true() { return all_of({}); }

  bool is_always_true() const { return kind == Kind::And && children.empty(); }

  friend bool operator==(const OsrExpr&, const OsrExpr&) = default;
};

// ---------------------------------------------------------------------------
// Evaluation

// A comparison on a missing path or against a property of a different type
// is false; evaluation never throws.
inline bool evaluate(const OsrExpr& expr,
                     const std::map<std::string, json>& properties) {
  switch (expr.kind) {
    case OsrExpr::Kind::And: {
      for (const OsrExpr& child : expr.children)
        if (!evaluate(child, properties)) return false;
      return true;
    }
    case OsrExpr::Kind::Or: {
      for (const OsrExpr& child : expr.children)
        if (evaluate(child, properties)) return true;
      return false;
    }
    case OsrExpr::Kind::Comparison: break;
  }
  auto hit = properties.find(expr.path);
  if (hit == properties.end()) return false;
  const json& value = hit->second;
  const json& lit = expr.literal;
  switch (expr.op) {
    case CompareOp::Eq:
    case CompareOp::Ne: {
      bool comparable = (value.is_string() && lit.is_string()) ||
                        (value.is_number() && lit.is_number()) ||
                        (value.is_boolean() && lit.is_boolean());
      if (!comparable) return false;
      bool equal = value.is_number() && lit.is_number()
                       ? value.get<double>() == lit.get<double>()
                       : value == lit;
      return expr.op == CompareOp::Eq ? equal : !equal;
    }
    default: {
      if (!value.is_number() || !lit.is_number()) return false;
      double v = value.get<double>();
      double l = lit.get<double>();
      switch (expr.op) {
        case CompareOp::Lt: return v < l;
        case CompareOp::Le: return v <= l;
        case CompareOp::Gt: return v > l;
        case CompareOp::Ge: return v >= l;
        default: return false;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct OsrParser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void error(const std::string& message, std::size_t at) const {
    fail(ErrorKind::Parse,
         "osr: " + message + " at position " + std::to_string(at));
  }

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' ||
                                 text[pos] == '\r' || text[pos] == '\n'))
      ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  // Keyword match on a word boundary.
  bool eat_keyword(std::string_view kw) {
    skip_ws();
    if (text.substr(pos, kw.size()) != kw) return false;
    std::size_t end = pos + kw.size();
    if (end < text.size() && (std::isalnum((unsigned char)text[end]) ||
                              text[end] == '_' || text[end] == '.'))
      return false;
    pos = end;
    return true;
  }

  static bool ident_start(char c) {
    return std::isalpha((unsigned char)c) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum((unsigned char)c) || c == '_' || c == '-';
  }

  std::string parse_ident() {
    skip_ws();
    std::size_t start = pos;
    if (pos >= text.size() || !ident_start(text[pos]))
      error("expected identifier", pos);
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    return std::string(text.substr(start, pos - start));
  }

  std::string parse_path() {
    std::string path = parse_ident();
    while (pos < text.size() && text[pos] == '.') {
      ++pos;
      path += '.';
      path += parse_ident();
    }
    return path;
  }

  CompareOp parse_op() {
    skip_ws();
    std::size_t at = pos;
    auto two = text.substr(pos, 2);
    if (two == "!=") { pos += 2; return CompareOp::Ne; }
    if (two == "<=") { pos += 2; return CompareOp::Le; }
    if (two == ">=") { pos += 2; return CompareOp::Ge; }
    if (pos < text.size()) {
      switch (text[pos]) {
        case '=': ++pos; return CompareOp::Eq;
        case '<': ++pos; return CompareOp::Lt;
        case '>': ++pos; return CompareOp::Gt;
      }
    }
    error("expected comparison operator", at);
  }

  json parse_literal() {
    skip_ws();
    std::size_t at = pos;
    if (pos >= text.size()) error("expected literal", at);
    char c = text[pos];
    if (c == '"') return parse_string(at);
    if (eat_keyword("true")) return json(true);
    if (eat_keyword("false")) return json(false);
    if (c == '-' || c == '+' || std::isdigit((unsigned char)c))
      return parse_number(at);
    error("expected literal", at);
  }

  json parse_string(std::size_t at) {
    ++pos;  // opening quote
    std::string out;
    while (pos < text.size()) {
      char c = text[pos++];
      if (c == '"') return json(out);
      if (c == '\\') {
        if (pos >= text.size()) break;
        char esc = text[pos++];
        if (esc == '"' || esc == '\\') out += esc;
        else error("unknown escape in string literal", pos - 1);
      } else {
        out += c;
      }
    }
    error("unterminated string literal", at);
  }

  json parse_number(std::size_t at) {
    std::size_t start = pos;
    if (text[pos] == '-' || text[pos] == '+') ++pos;
    std::size_t digits = 0;
    while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos, ++digits;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos, ++digits;
    }
    if (digits == 0) error("malformed number", at);
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
      ++pos;
      if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
      std::size_t exp_digits = 0;
      while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos, ++exp_digits;
      if (exp_digits == 0) error("malformed number exponent", at);
    }
    return json(std::stod(std::string(text.substr(start, pos - start))));
  }

  OsrExpr parse_comparison() {
    skip_ws();
    std::size_t at = pos;
    std::string path = parse_path();
    CompareOp op = parse_op();
    json lit = parse_literal();
    bool ordering = op == CompareOp::Lt || op == CompareOp::Le ||
                    op == CompareOp::Gt || op == CompareOp::Ge;
    if (ordering && !lit.is_number())
      error("ordering comparison on '" + path + "' requires a numeric literal",
            at);
    return OsrExpr::comparison(std::move(path), op, std::move(lit));
  }

  OsrExpr parse_factor() {
    skip_ws();
    if (eat('(')) {
      OsrExpr inner = parse_expr();
      if (!eat(')')) error("expected ')'", pos);
      return inner;
    }
    return parse_comparison();
  }

  OsrExpr parse_term() {
    std::vector<OsrExpr> factors;
    factors.push_back(parse_factor());
    while (eat_keyword("AND")) factors.push_back(parse_factor());
    if (factors.size() == 1) return std::move(factors.front());
    return OsrExpr::all_of(std::move(factors));
  }

  OsrExpr parse_expr() {
    std::vector<OsrExpr> terms;
    terms.push_back(parse_term());
    while (eat_keyword("OR")) terms.push_back(parse_term());
    if (terms.size() == 1) return std::move(terms.front());
    return OsrExpr::any_of(std::move(terms));
  }
};

}  // namespace detail

inline OsrExpr parse_osr(const std::string& text) {
  detail::OsrParser p{text};
  p.skip_ws();
  if (p.pos == text.size()) return OsrExpr::always_true();
  OsrExpr expr = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.error("unexpected trailing input", p.pos);
  return expr;
}

// ---------------------------------------------------------------------------
// Serialization

// Collapses single-child And/Or nodes; parse ∘ serialize is the identity on
// normalized expressions.
inline OsrExpr normalize(const OsrExpr& expr) {
  if (expr.kind == OsrExpr::Kind::Comparison) return expr;
  std::vector<OsrExpr> children;
  children.reserve(expr.children.size());
  for (const OsrExpr& child : expr.children) children.push_back(normalize(child));
  if (children.size() == 1) return std::move(children.front());
  OsrExpr out = expr;
  out.children = std::move(children);
  return out;
}

namespace detail {

inline void serialize_into(const OsrExpr& expr, std::string& out) {
  switch (expr.kind) {
    case OsrExpr::Kind::Comparison: {
      out += '(';
      out += expr.path;
      out += ' ';
      out += to_text(expr.op);
      out += ' ';
      out += expr.literal.dump();  // JSON scalars match the literal grammar
      out += ')';
      return;
    }
    case OsrExpr::Kind::And:
    case OsrExpr::Kind::Or: {
      const char* joiner = expr.kind == OsrExpr::Kind::And ? " AND " : " OR ";
      if (expr.children.empty()) {
        // And({}) is the empty string at the top level; a nested empty Or has
        // no surface form, so emit a contradiction that evaluates identically.
        if (expr.kind == OsrExpr::Kind::Or)
          out += "((__never = 0) AND (__never != 0))";
        return;
      }
      out += '(';
      bool first = true;
      for (const OsrExpr& child : expr.children) {
        if (!first) out += joiner;
        first = false;
        serialize_into(child, out);
      }
      out += ')';
      return;
    }
  }
}

}  // namespace detail

// Fully parenthesized canonical form. And({}) serializes to the empty string.
inline std::string serialize_osr(const OsrExpr& expr) {
  OsrExpr n = normalize(expr);
  if (n.is_always_true()) return "";
  std::string out;
  detail::serialize_into(n, out);
  return out;
}

}  // namespace choreo
