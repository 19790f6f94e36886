#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "newton/source.hpp"

namespace newton::ast {

enum class ExprKind {
  Number,      // text holds the literal lexeme
  Identifier,  // text holds the name
  Index,       // children: {base identifier, index (identifier or integer)}
  Negate,      // children: {operand}
  Binary,      // children: {lhs, rhs}
};

enum class BinaryOp { Add, Sub, Mul, Div, Pow };

const char* to_string(BinaryOp op);

struct Expr {
  ExprKind kind = ExprKind::Number;
  BinaryOp op = BinaryOp::Add;  // meaningful for Binary only
  std::string text;
  bool is_integer = false;  // Number: lexeme is an integer literal
  std::vector<Expr> children;
  SourceSpan span;

  static Expr number(std::string lexeme, bool integer, SourceSpan span = {});
  static Expr identifier(std::string name, SourceSpan span = {});
  static Expr index(Expr base, Expr idx, SourceSpan span = {});
  static Expr negate(Expr operand, SourceSpan span = {});
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs, SourceSpan span = {});
};

enum class RelOp { Proportional, Less, LessEqual, Greater, GreaterEqual, Equal };

const char* to_string(RelOp op);
std::optional<RelOp> parse_relop(std::string_view text);

struct Relation {
  Expr lhs;
  RelOp op = RelOp::Proportional;
  Expr rhs;
  SourceSpan span;
};

struct IndexRange {
  std::string variable;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  SourceSpan span;
};

struct NameField {
  std::string text;      // unquoted
  std::string language;  // may be empty
  SourceSpan span;
};

struct SignalDecl {
  std::string name;
  std::optional<IndexRange> index_range;
  std::optional<NameField> name_field;
  std::optional<std::string> symbol;
  SourceSpan symbol_span;
  std::optional<Expr> derivation;  // nullopt means `derivation = none`
  SourceSpan span;
};

struct ConstantDecl {
  std::string name;
  Expr value;
  SourceSpan span;
};

struct Param {
  std::string name;
  std::string type_name;
  SourceSpan span;
};

struct InvariantDecl {
  std::string name;
  std::vector<Param> params;
  std::vector<Relation> body;
  SourceSpan span;
};

using Decl = std::variant<SignalDecl, ConstantDecl, InvariantDecl>;

const std::string& decl_name(const Decl& d);
const SourceSpan& decl_span(const Decl& d);

// Span-insensitive structural equality.
bool equivalent(const Expr& a, const Expr& b);
bool equivalent(const Relation& a, const Relation& b);
bool equivalent(const Decl& a, const Decl& b);
bool equivalent(const std::vector<Decl>& a, const std::vector<Decl>& b);

/// Renders source text that parses back to an equivalent tree. Parentheses
/// are inserted only where precedence or associativity requires them.
std::string print(const Expr& e);
std::string print(const Relation& r);
std::string print(const Decl& d);
std::string print(const std::vector<Decl>& decls);

}  // namespace newton::ast
