#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "newton/source.hpp"

namespace newton {

enum class TokenKind {
  Identifier,
  IntegerLiteral,
  RealLiteral,
  StringLiteral,
  Keyword,
  Operator,
  Punctuation,
};

const char* to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string lexeme;
  SourceSpan span;
  std::size_t offset = 0;  // byte offset of the lexeme in its source

  bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
  bool is_punct(std::string_view text) const { return kind == TokenKind::Punctuation && lexeme == text; }
  bool is_op(std::string_view text) const { return kind == TokenKind::Operator && lexeme == text; }
  bool is_keyword(std::string_view text) const { return kind == TokenKind::Keyword && lexeme == text; }
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<Diagnostic> errors;

  bool ok() const { return errors.empty(); }
};

/// Keywords are `signal`, `constant`, `invariant` and `none`. Field names
/// (`name`, `symbol`, `derivation`) and the range word `to` are contextual
/// and lex as identifiers. `#` starts a comment running to end of line.
///
/// Lexing continues after an error, so every illegal character and
/// unterminated string in the input is reported.
LexResult tokenize(std::string_view source, std::string_view file_name);

}  // namespace newton
