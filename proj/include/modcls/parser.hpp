#pragma once

// Recursive-descent parser for the expression language
//
//   expr   := ['+'|'-'] term (('+'|'-') ['+'|'-'] term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' nonneg-integer)?
//   atom   := identifier | integer | '(' expr ')'
//
// The parser is generic over the value algebra; the semantics policy supplies
// the meaning of identifiers and the arithmetic.

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "modcls/error.hpp"
#include "modcls/scalar.hpp"

namespace modcls {

/// Source position of the first character of an expression (1-based).
struct SourceLocation {
  int line = 1;
  int column = 1;
};

/// Semantics must provide:
///   using Value = ...;
///   std::optional<Value> identifier(const std::string&) const;
///   Value constant(const Rational&) const;
///   Value add(const Value&, const Value&) const;   (likewise sub, mul)
///   Value neg(const Value&) const;
///   Value div(const Value&, const Value&) const;   throws MathError on bad divisors
template <class Semantics>
class ExpressionParser {
 public:
  using Value = typename Semantics::Value;

  ExpressionParser(std::string_view text, const Semantics& sem, SourceLocation origin = {})
      : text_(text), sem_(sem), origin_(origin) {}

  Value parse() {
    skip_ws();
    if (at_end()) fail("empty expression");
    Value v = expr();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
    return v;
  }

 private:
  Value expr() {
    Value acc = signed_term();
    for (;;) {
      skip_ws();
      if (at_end()) break;
      const char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      Value rhs = signed_term();
      acc = c == '+' ? sem_.add(acc, rhs) : sem_.sub(acc, rhs);
    }
    return acc;
  }

  Value signed_term() {
    skip_ws();
    if (!at_end() && (peek() == '-' || peek() == '+')) {
      const bool negate = peek() == '-';
      ++pos_;
      Value v = signed_term();
      return negate ? sem_.neg(v) : v;
    }
    return term();
  }

  Value term() {
    Value acc = factor();
    for (;;) {
      skip_ws();
      if (at_end()) break;
      const char c = peek();
      if (c != '*' && c != '/') break;
      const std::size_t op_pos = pos_;
      ++pos_;
      Value rhs = factor();
      if (c == '*') {
        acc = sem_.mul(acc, rhs);
      } else {
        try {
          acc = sem_.div(acc, rhs);
        } catch (const MathError& e) {
          fail_at(op_pos, e.what());
        }
      }
    }
    return acc;
  }

  Value factor() {
    Value base = atom();
    skip_ws();
    if (!at_end() && peek() == '^') {
      ++pos_;
      skip_ws();
      const std::size_t start = pos_;
      if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a nonnegative integer exponent");
      Rational e = integer();
      if (e > 64) fail_at(start, "exponent too large");
      Value result = sem_.constant(Rational(1));
      for (unsigned long k = 0; k < e.get_num().get_ui(); ++k) result = sem_.mul(result, base);
      return result;
    }
    return base;
  }

  Value atom() {
    skip_ws();
    if (at_end()) fail("unexpected end of expression");
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Value v = expr();
      skip_ws();
      if (at_end() || peek() != ')') fail("expected ')'");
      ++pos_;
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return sem_.constant(integer());
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      std::optional<Value> v = sem_.identifier(name);
      if (!v) fail_at(start, "unknown identifier '" + name + "'");
      return *v;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Rational integer() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    return Rational(std::string(text_.substr(start, pos_ - start)));
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }

  [[noreturn]] void fail_at(std::size_t pos, const std::string& msg) const {
    int line = origin_.line;
    int column = origin_.column;
    for (std::size_t i = 0; i < pos && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(msg, line, column);
  }

  std::string_view text_;
  const Semantics& sem_;
  SourceLocation origin_;
  std::size_t pos_ = 0;
};

/// Identifiers are chart coordinates.
struct ScalarSemantics {
  using Value = ScalarField;
  const BaseChart& chart;

  std::optional<Value> identifier(const std::string& name) const {
    if (auto i = chart.index_of(name)) return ScalarField::variable(*i);
    return std::nullopt;
  }
  Value constant(const Rational& c) const { return ScalarField(c); }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value neg(const Value& a) const { return -a; }
  Value div(const Value& a, const Value& b) const { return a / b; }
};

inline ScalarField parse_scalar(std::string_view text, const BaseChart& chart, SourceLocation origin = {}) {
  ScalarSemantics sem{chart};
  return ExpressionParser<ScalarSemantics>(text, sem, origin).parse();
}

}  // namespace modcls
