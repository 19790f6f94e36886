#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "newton/ast.hpp"
#include "newton/lexer.hpp"

namespace newton {

struct ParseResult {
  std::vector<ast::Decl> decls;  // every declaration that parsed cleanly
  std::vector<Diagnostic> errors;

  bool ok() const { return errors.empty(); }
};

/// Recursive-descent parser over a token list. A malformed declaration
/// yields one ParseError and parsing resumes at the next `name : signal`,
/// `name : constant` or `name : invariant` header.
///
/// When the offending token sits on a later line than the token before it,
/// the error is anchored just past that earlier token, which is where the
/// missing piece belongs.
ParseResult parse(std::span<const Token> tokens);

/// tokenize + parse; lex errors are returned ahead of parse errors and
/// suppress parsing.
ParseResult parse_source(std::string_view source, std::string_view file_name);

}  // namespace newton
