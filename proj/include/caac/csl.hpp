// Copyright 2026 The CAAC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Context specification language: atoms over entity attributes and derived
// functions, composed with &&, || and !. Parsing and evaluation are pure.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "caac/decimal.hpp"
#include "caac/error.hpp"

namespace caac::csl {

inline constexpr int kMaxDepth = 64;

// ---------------------------------------------------------------------------
// Three-valued truth
// ---------------------------------------------------------------------------

enum class Truth : std::uint8_t { kFalse, kTrue, kUnknown };

constexpr Truth And(Truth a, Truth b) {
  if (a == Truth::kFalse || b == Truth::kFalse) return Truth::kFalse;
  if (a == Truth::kTrue && b == Truth::kTrue) return Truth::kTrue;
  return Truth::kUnknown;
}

constexpr Truth Or(Truth a, Truth b) {
  if (a == Truth::kTrue || b == Truth::kTrue) return Truth::kTrue;
  if (a == Truth::kFalse && b == Truth::kFalse) return Truth::kFalse;
  return Truth::kUnknown;
}

constexpr Truth Not(Truth a) {
  switch (a) {
    case Truth::kTrue: return Truth::kFalse;
    case Truth::kFalse: return Truth::kTrue;
    case Truth::kUnknown: return Truth::kUnknown;
  }
  return Truth::kUnknown;
}

constexpr Truth FromBool(bool b) { return b ? Truth::kTrue : Truth::kFalse; }

constexpr std::string_view ToString(Truth t) {
  switch (t) {
    case Truth::kTrue: return "True";
    case Truth::kFalse: return "False";
    case Truth::kUnknown: return "Unknown";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

class Literal {
 public:
  Literal() : value_(std::string()) {}

  static Literal String(std::string s) { return Literal(std::move(s)); }
  static Literal Number(Decimal d) { return Literal(std::move(d)); }

  bool is_string() const { return std::holds_alternative<std::string>(value_); }
  bool is_number() const { return std::holds_alternative<Decimal>(value_); }
  const std::string& as_string() const { return std::get<std::string>(value_); }
  const Decimal& as_number() const { return std::get<Decimal>(value_); }

  // Plain text: the string itself, or the number's spelling.
  const std::string& text() const {
    return is_string() ? as_string() : as_number().text();
  }

  friend bool operator==(const Literal&, const Literal&) = default;

 private:
  explicit Literal(std::string s) : value_(std::move(s)) {}
  explicit Literal(Decimal d) : value_(std::move(d)) {}

  std::variant<std::string, Decimal> value_;
};

using ListValue = std::vector<Literal>;
using FactValue = std::variant<Literal, ListValue>;

inline std::string QuoteString(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

inline std::string ToCsl(const Literal& lit) {
  return lit.is_string() ? QuoteString(lit.as_string()) : lit.as_number().text();
}

inline std::string ToCsl(const FactValue& value) {
  if (const auto* lit = std::get_if<Literal>(&value)) return ToCsl(*lit);
  std::string out = "[";
  const auto& list = std::get<ListValue>(value);
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i != 0) out += ", ";
    out += ToCsl(list[i]);
  }
  return out + "]";
}

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

struct ContextRef {
  enum class Kind : std::uint8_t { kSimpleAttribute, kComplexFunction };

  Kind kind = Kind::kSimpleAttribute;
  std::string entity_role;             // simple only
  std::string attribute;               // simple only
  std::string function;                // complex only
  std::vector<std::string> arguments;  // complex only: entity roles

  static ContextRef Simple(std::string role, std::string attribute) {
    return {Kind::kSimpleAttribute, std::move(role), std::move(attribute), {}, {}};
  }
  static ContextRef Complex(std::string function,
                            std::vector<std::string> arguments) {
    return {Kind::kComplexFunction, {}, {}, std::move(function),
            std::move(arguments)};
  }

  bool is_simple() const { return kind == Kind::kSimpleAttribute; }

  std::string ToString() const {
    if (is_simple()) return entity_role + "." + attribute;
    std::string out = function + "(";
    for (std::size_t i = 0; i < arguments.size(); ++i) {
      if (i != 0) out += ", ";
      out += arguments[i];
    }
    return out + ")";
  }

  friend bool operator==(const ContextRef&, const ContextRef&) = default;
};

struct RelOp {
  enum class Kind : std::uint8_t { kLt, kLe, kGt, kGe, kEq, kNe, kUserDefined };

  Kind kind = Kind::kEq;
  std::string name;  // user-defined only

  static RelOp Builtin(Kind k) { return {k, {}}; }
  static RelOp UserDefined(std::string name) {
    return {Kind::kUserDefined, std::move(name)};
  }

  bool is_builtin() const { return kind != Kind::kUserDefined; }

  std::string ToSymbol() const {
    switch (kind) {
      case Kind::kLt: return "<";
      case Kind::kLe: return "<=";
      case Kind::kGt: return ">";
      case Kind::kGe: return ">=";
      case Kind::kEq: return "==";
      case Kind::kNe: return "!=";
      case Kind::kUserDefined: return name;
    }
    return name;
  }

  // Accepts the six built-in symbols; anything else is treated as a
  // user-defined operator name.
  static RelOp FromSymbol(std::string_view s) {
    if (s == "<") return Builtin(Kind::kLt);
    if (s == "<=") return Builtin(Kind::kLe);
    if (s == ">") return Builtin(Kind::kGt);
    if (s == ">=") return Builtin(Kind::kGe);
    if (s == "==") return Builtin(Kind::kEq);
    if (s == "!=") return Builtin(Kind::kNe);
    return UserDefined(std::string(s));
  }

  friend bool operator==(const RelOp&, const RelOp&) = default;
};

struct Atom {
  ContextRef ref;
  RelOp op;
  Literal value;

  friend bool operator==(const Atom&, const Atom&) = default;
};

// Immutable expression tree with value semantics; copies share nodes.
class Expression {
 public:
  enum class Kind : std::uint8_t { kAtom, kAnd, kOr, kNot };

  Expression() = default;

  static Expression MakeAtom(ContextRef ref, RelOp op, Literal value) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::kAtom;
    node->atom = Atom{std::move(ref), std::move(op), std::move(value)};
    node->depth = 1;
    return Expression(std::move(node));
  }
  static Expression MakeAnd(Expression lhs, Expression rhs) {
    return Binary(Kind::kAnd, std::move(lhs), std::move(rhs));
  }
  static Expression MakeOr(Expression lhs, Expression rhs) {
    return Binary(Kind::kOr, std::move(lhs), std::move(rhs));
  }
  static Expression MakeNot(Expression operand) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::kNot;
    node->depth = operand.depth() + 1;
    node->children.push_back(std::move(operand));
    return Expression(std::move(node));
  }

  bool empty() const { return node_ == nullptr; }
  Kind kind() const { return node_->kind; }
  int depth() const { return node_ ? node_->depth : 0; }
  const Atom& atom() const { return node_->atom; }
  const Expression& lhs() const { return node_->children[0]; }
  const Expression& rhs() const { return node_->children[1]; }
  const Expression& operand() const { return node_->children[0]; }

  friend bool operator==(const Expression& a, const Expression& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::kAtom: return a.atom() == b.atom();
      case Kind::kNot: return a.operand() == b.operand();
      case Kind::kAnd:
      case Kind::kOr: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
    return false;
  }

 private:
  struct Node {
    Kind kind = Kind::kAtom;
    Atom atom;
    std::vector<Expression> children;
    int depth = 1;
  };

  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Expression Binary(Kind kind, Expression lhs, Expression rhs) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->depth = std::max(lhs.depth(), rhs.depth()) + 1;
    node->children.push_back(std::move(lhs));
    node->children.push_back(std::move(rhs));
    return Expression(std::move(node));
  }

  std::shared_ptr<const Node> node_;
};

// Calls fn(const Atom&) for every atom, left to right.
template <class Fn>
void ForEachAtom(const Expression& e, Fn&& fn) {
  switch (e.kind()) {
    case Expression::Kind::kAtom: fn(e.atom()); return;
    case Expression::Kind::kNot: ForEachAtom(e.operand(), fn); return;
    case Expression::Kind::kAnd:
    case Expression::Kind::kOr:
      ForEachAtom(e.lhs(), fn);
      ForEachAtom(e.rhs(), fn);
      return;
  }
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

inline bool LiteralEquals(const Literal& a, const Literal& b) {
  if (a.is_string() != b.is_string()) return false;
  if (a.is_string()) return a.as_string() == b.as_string();
  return Decimal::NumericEqual(a.as_number(), b.as_number());
}

// Named binary predicates over (fact value, operand).
class OperatorRegistry {
 public:
  using Predicate = std::function<bool(const FactValue&, const FactValue&)>;

  // Registry with the shipped `contains` operator: true when a list-valued
  // fact holds the operand (or a scalar fact equals it).
  static const OperatorRegistry& Default() {
    static const OperatorRegistry registry = [] {
      OperatorRegistry r;
      r.Register("contains", [](const FactValue& fact, const FactValue& operand) {
        const auto* needle = std::get_if<Literal>(&operand);
        if (needle == nullptr) throw TypeMismatch("contains: operand must be scalar");
        if (const auto* list = std::get_if<ListValue>(&fact)) {
          return std::any_of(list->begin(), list->end(), [&](const Literal& l) {
            return LiteralEquals(l, *needle);
          });
        }
        return LiteralEquals(std::get<Literal>(fact), *needle);
      });
      return r;
    }();
    return registry;
  }

  void Register(std::string name, Predicate predicate) {
    predicates_[std::move(name)] = std::move(predicate);
  }
  bool Contains(std::string_view name) const {
    return predicates_.find(name) != predicates_.end();
  }
  const Predicate* Find(std::string_view name) const {
    auto it = predicates_.find(name);
    return it == predicates_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::string, Predicate, std::less<>> predicates_;
};

// Applies a relational operator to a present fact value and an operand.
inline bool Compare(const FactValue& lhs, const RelOp& op, const FactValue& rhs,
                    const OperatorRegistry& registry) {
  if (!op.is_builtin()) {
    const auto* pred = registry.Find(op.name);
    if (pred == nullptr) {
      throw UnregisteredOperator("operator '" + op.name + "' is not registered");
    }
    return (*pred)(lhs, rhs);
  }
  const auto* a = std::get_if<Literal>(&lhs);
  const auto* b = std::get_if<Literal>(&rhs);
  if (a == nullptr || b == nullptr) {
    throw TypeMismatch("operator '" + op.ToSymbol() +
                       "' cannot compare list values");
  }
  if (a->is_string() != b->is_string()) {
    throw TypeMismatch("cannot compare " + ToCsl(*a) + " with " + ToCsl(*b) +
                       " using '" + op.ToSymbol() + "'");
  }
  std::strong_ordering order = std::strong_ordering::equal;
  if (a->is_string()) {
    const int c = a->as_string().compare(b->as_string());
    order = c <=> 0;
  } else {
    order = Decimal::Compare(a->as_number(), b->as_number());
  }
  switch (op.kind) {
    case RelOp::Kind::kLt: return order < 0;
    case RelOp::Kind::kLe: return order <= 0;
    case RelOp::Kind::kGt: return order > 0;
    case RelOp::Kind::kGe: return order >= 0;
    case RelOp::Kind::kEq: return order == 0;
    case RelOp::Kind::kNe: return order != 0;
    case RelOp::Kind::kUserDefined: break;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace detail {

enum class Tok : std::uint8_t {
  kIdent, kString, kNumber, kLParen, kRParen, kComma, kDot,
  kAndAnd, kOrOr, kBang, kLt, kLe, kGt, kGe, kEqEq, kNe, kEnd
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;  // identifier name, unescaped string, or number spelling
  int line = 1;
  int column = 1;
};

inline std::string_view Describe(Tok t) {
  switch (t) {
    case Tok::kIdent: return "identifier";
    case Tok::kString: return "string";
    case Tok::kNumber: return "number";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kComma: return "','";
    case Tok::kDot: return "'.'";
    case Tok::kAndAnd: return "'&&'";
    case Tok::kOrOr: return "'||'";
    case Tok::kBang: return "'!'";
    case Tok::kLt: return "'<'";
    case Tok::kLe: return "'<='";
    case Tok::kGt: return "'>'";
    case Tok::kGe: return "'>='";
    case Tok::kEqEq: return "'=='";
    case Tok::kNe: return "'!='";
    case Tok::kEnd: return "end of input";
  }
  return "token";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> Tokenize() {
    std::vector<Token> out;
    for (;;) {
      SkipSpaceAndComments();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::kEnd;
        out.push_back(std::move(t));
        return out;
      }
      const char c = src_[pos_];
      if (IsIdentStart(c)) {
        const std::size_t begin = pos_;
        while (pos_ < src_.size() && IsIdentChar(src_[pos_])) Advance();
        t.kind = Tok::kIdent;
        t.text = std::string(src_.substr(begin, pos_ - begin));
      } else if (IsDigit(c) || (c == '-' && pos_ + 1 < src_.size() &&
                                IsDigit(src_[pos_ + 1]))) {
        t.kind = Tok::kNumber;
        t.text = LexNumber();
      } else if (c == '"') {
        t.kind = Tok::kString;
        t.text = LexString();
      } else {
        t.kind = LexPunct();
      }
      out.push_back(std::move(t));
    }
  }

 private:
  static bool IsDigit(char c) { return c >= '0' && c <= '9'; }
  static bool IsIdentStart(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  }
  static bool IsIdentChar(char c) { return IsIdentStart(c) || IsDigit(c); }

  void Advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  [[noreturn]] void Fail(const std::string& message,
                         std::vector<std::string> expected = {}) const {
    throw SyntaxError(message, line_, column_, std::move(expected));
  }

  void SkipSpaceAndComments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        Advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') Advance();
      } else {
        return;
      }
    }
  }

  std::string LexNumber() {
    const std::size_t begin = pos_;
    if (src_[pos_] == '-') Advance();
    while (pos_ < src_.size() && IsDigit(src_[pos_])) Advance();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      Advance();
      if (pos_ >= src_.size() || !IsDigit(src_[pos_])) {
        Fail("malformed number", {"digit"});
      }
      while (pos_ < src_.size() && IsDigit(src_[pos_])) Advance();
    }
    if (pos_ < src_.size() && IsIdentStart(src_[pos_])) {
      Fail("malformed number");
    }
    return std::string(src_.substr(begin, pos_ - begin));
  }

  std::string LexString() {
    Advance();  // opening quote
    std::string out;
    for (;;) {
      if (pos_ >= src_.size()) Fail("unterminated string", {"'\"'"});
      const char c = src_[pos_];
      if (c == '"') {
        Advance();
        return out;
      }
      if (c == '\\') {
        Advance();
        if (pos_ >= src_.size()) Fail("unterminated string", {"'\"'"});
        switch (src_[pos_]) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          default: Fail("unknown escape sequence");
        }
        Advance();
        continue;
      }
      out += c;
      Advance();
    }
  }

  Tok LexPunct() {
    const char c = src_[pos_];
    const char next = pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0';
    auto take = [&](int n, Tok t) {
      for (int i = 0; i < n; ++i) Advance();
      return t;
    };
    switch (c) {
      case '(': return take(1, Tok::kLParen);
      case ')': return take(1, Tok::kRParen);
      case ',': return take(1, Tok::kComma);
      case '.': return take(1, Tok::kDot);
      case '<': return next == '=' ? take(2, Tok::kLe) : take(1, Tok::kLt);
      case '>': return next == '=' ? take(2, Tok::kGe) : take(1, Tok::kGt);
      case '!': return next == '=' ? take(2, Tok::kNe) : take(1, Tok::kBang);
      case '=':
        if (next == '=') return take(2, Tok::kEqEq);
        Fail("unexpected '='", {"'=='"});
      case '&':
        if (next == '&') return take(2, Tok::kAndAnd);
        Fail("unexpected '&'", {"'&&'"});
      case '|':
        if (next == '|') return take(2, Tok::kOrOr);
        Fail("unexpected '|'", {"'||'"});
      default:
        break;
    }
    Fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct ParseOptions {
  // Reject user-defined operator names that `operators` does not know.
  bool strict = false;
  const OperatorRegistry* operators = &OperatorRegistry::Default();
};

namespace detail {

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ParseOptions& options)
      : tokens_(std::move(tokens)), options_(options) {}

  Expression ParseAll() {
    Expression e = ParseOr();
    if (Peek().kind != Tok::kEnd) {
      FailAt(Peek(), "unexpected " + std::string(Describe(Peek().kind)),
             {"'&&'", "'||'", std::string(Describe(Tok::kEnd))});
    }
    return e;
  }

 private:
  const Token& Peek() const { return tokens_[pos_]; }
  const Token& Next() { return tokens_[pos_++]; }

  [[noreturn]] static void FailAt(const Token& t, const std::string& message,
                                  std::vector<std::string> expected = {}) {
    throw SyntaxError(message, t.line, t.column, std::move(expected));
  }

  const Token& Expect(Tok kind) {
    if (Peek().kind != kind) {
      FailAt(Peek(), "unexpected " + std::string(Describe(Peek().kind)),
             {std::string(Describe(kind))});
    }
    return Next();
  }

  Expression CheckDepth(Expression e, const Token& at) const {
    if (e.depth() > kMaxDepth) {
      FailAt(at, "expression nesting exceeds maximum depth of " +
                     std::to_string(kMaxDepth));
    }
    return e;
  }

  Expression ParseOr() {
    Expression lhs = ParseAnd();
    while (Peek().kind == Tok::kOrOr) {
      const Token& op = Next();
      Expression rhs = ParseAnd();
      lhs = CheckDepth(Expression::MakeOr(std::move(lhs), std::move(rhs)), op);
    }
    return lhs;
  }

  Expression ParseAnd() {
    Expression lhs = ParseUnary();
    while (Peek().kind == Tok::kAndAnd) {
      const Token& op = Next();
      Expression rhs = ParseUnary();
      lhs = CheckDepth(Expression::MakeAnd(std::move(lhs), std::move(rhs)), op);
    }
    return lhs;
  }

  Expression ParseUnary() {
    const Token& t = Peek();
    if (t.kind == Tok::kBang || t.kind == Tok::kLParen) {
      if (++nesting_ > kMaxDepth) {
        FailAt(t, "expression nesting exceeds maximum depth of " +
                      std::to_string(kMaxDepth));
      }
      Next();
      Expression e;
      if (t.kind == Tok::kBang) {
        e = CheckDepth(Expression::MakeNot(ParseUnary()), t);
      } else {
        e = ParseOr();
        Expect(Tok::kRParen);
      }
      --nesting_;
      return e;
    }
    if (t.kind != Tok::kIdent) {
      FailAt(t, "unexpected " + std::string(Describe(t.kind)),
             {"'!'", "'('", "identifier"});
    }
    return ParseAtom();
  }

  Expression ParseAtom() {
    const Token& head = Next();
    ContextRef ref;
    if (Peek().kind == Tok::kDot) {
      Next();
      const Token& attr = Expect(Tok::kIdent);
      ref = ContextRef::Simple(head.text, attr.text);
    } else if (Peek().kind == Tok::kLParen) {
      Next();
      std::vector<std::string> args;
      args.push_back(Expect(Tok::kIdent).text);
      while (Peek().kind == Tok::kComma) {
        Next();
        args.push_back(Expect(Tok::kIdent).text);
      }
      Expect(Tok::kRParen);
      ref = ContextRef::Complex(head.text, std::move(args));
    } else {
      FailAt(Peek(), "unexpected " + std::string(Describe(Peek().kind)),
             {"'.'", "'('"});
    }
    RelOp op = ParseRelOp();
    const Token& lit = Peek();
    Literal value;
    if (lit.kind == Tok::kString) {
      value = Literal::String(lit.text);
    } else if (lit.kind == Tok::kNumber) {
      value = Literal::Number(*Decimal::Parse(lit.text));
    } else {
      FailAt(lit, "unexpected " + std::string(Describe(lit.kind)),
             {"string", "number"});
    }
    Next();
    return Expression::MakeAtom(std::move(ref), std::move(op), std::move(value));
  }

  RelOp ParseRelOp() {
    const Token& t = Next();
    switch (t.kind) {
      case Tok::kLt: return RelOp::Builtin(RelOp::Kind::kLt);
      case Tok::kLe: return RelOp::Builtin(RelOp::Kind::kLe);
      case Tok::kGt: return RelOp::Builtin(RelOp::Kind::kGt);
      case Tok::kGe: return RelOp::Builtin(RelOp::Kind::kGe);
      case Tok::kEqEq: return RelOp::Builtin(RelOp::Kind::kEq);
      case Tok::kNe: return RelOp::Builtin(RelOp::Kind::kNe);
      case Tok::kIdent:
        if (options_.strict &&
            (options_.operators == nullptr || !options_.operators->Contains(t.text))) {
          throw UnknownOperatorError(std::to_string(t.line) + ":" +
                                     std::to_string(t.column) +
                                     ": unknown operator '" + t.text + "'");
        }
        return RelOp::UserDefined(t.text);
      default:
        FailAt(t, "unexpected " + std::string(Describe(t.kind)),
               {"'<'", "'<='", "'>'", "'>='", "'=='", "'!='", "operator name"});
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int nesting_ = 0;
  const ParseOptions& options_;
};

}  // namespace detail

inline Expression Parse(std::string_view source, const ParseOptions& options = {}) {
  detail::Parser parser(detail::Lexer(source).Tokenize(), options);
  return parser.ParseAll();
}

// Canonical, fully parenthesized text. Parse(Serialize(e)) == e.
inline std::string Serialize(const Expression& e) {
  switch (e.kind()) {
    case Expression::Kind::kAtom: {
      const Atom& a = e.atom();
      return "(" + a.ref.ToString() + " " + a.op.ToSymbol() + " " +
             ToCsl(a.value) + ")";
    }
    case Expression::Kind::kNot: return "(!" + Serialize(e.operand()) + ")";
    case Expression::Kind::kAnd:
      return "(" + Serialize(e.lhs()) + " && " + Serialize(e.rhs()) + ")";
    case Expression::Kind::kOr:
      return "(" + Serialize(e.lhs()) + " || " + Serialize(e.rhs()) + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

// Entity role (User, Owner, ...) to concrete entity identifier.
using EntityBindings = std::map<std::string, std::string, std::less<>>;

// Source of context facts for evaluation. Lookup returns nullptr for a
// missing fact; Derive returns nullopt when no derivation applies.
template <class R>
concept FactResolver = requires(const R& r, std::string_view entity,
                                std::string_view attribute,
                                std::span<const std::string> ids) {
  { r.Lookup(entity, attribute) } -> std::convertible_to<const FactValue*>;
  { r.Derive(attribute, ids) } -> std::convertible_to<std::optional<Literal>>;
};

struct AtomTrace {
  std::string atom;  // serialized atom
  Truth value = Truth::kUnknown;

  friend bool operator==(const AtomTrace&, const AtomTrace&) = default;
};

inline const std::string& ResolveRole(const EntityBindings& bindings,
                                      const std::string& role) {
  auto it = bindings.find(role);
  if (it == bindings.end()) {
    throw UnboundEntityRole("entity role '" + role + "' is not bound");
  }
  return it->second;
}

template <FactResolver R>
Truth EvaluateAtom(const Atom& atom, const R& resolver,
                   const EntityBindings& bindings,
                   const OperatorRegistry& registry) {
  if (atom.ref.is_simple()) {
    const std::string& entity = ResolveRole(bindings, atom.ref.entity_role);
    const FactValue* fact = resolver.Lookup(entity, atom.ref.attribute);
    if (fact == nullptr) return Truth::kUnknown;
    return FromBool(Compare(*fact, atom.op, FactValue(atom.value), registry));
  }
  std::vector<std::string> ids;
  ids.reserve(atom.ref.arguments.size());
  for (const auto& role : atom.ref.arguments) ids.push_back(ResolveRole(bindings, role));
  std::optional<Literal> derived =
      resolver.Derive(atom.ref.function, std::span<const std::string>(ids));
  if (!derived) return Truth::kUnknown;
  return FromBool(Compare(FactValue(*derived), atom.op, FactValue(atom.value), registry));
}

// Kleene evaluation. Every atom is evaluated (no short-circuit), so errors
// surface independent of sibling values and traces are complete.
template <FactResolver R>
Truth Evaluate(const Expression& e, const R& resolver,
               const EntityBindings& bindings,
               const OperatorRegistry& registry = OperatorRegistry::Default(),
               std::vector<AtomTrace>* trace = nullptr) {
  switch (e.kind()) {
    case Expression::Kind::kAtom: {
      Truth t = EvaluateAtom(e.atom(), resolver, bindings, registry);
      if (trace != nullptr) trace->push_back({Serialize(e), t});
      return t;
    }
    case Expression::Kind::kNot:
      return Not(Evaluate(e.operand(), resolver, bindings, registry, trace));
    case Expression::Kind::kAnd: {
      Truth l = Evaluate(e.lhs(), resolver, bindings, registry, trace);
      Truth r = Evaluate(e.rhs(), resolver, bindings, registry, trace);
      return And(l, r);
    }
    case Expression::Kind::kOr: {
      Truth l = Evaluate(e.lhs(), resolver, bindings, registry, trace);
      Truth r = Evaluate(e.rhs(), resolver, bindings, registry, trace);
      return Or(l, r);
    }
  }
  return Truth::kUnknown;
}

}  // namespace caac::csl
