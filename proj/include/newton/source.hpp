#pragma once

#include <string>
#include <vector>

namespace newton {

/// 1-based, inclusive-start source range. `line_end/col_end` point one past
/// the last character on the last line.
struct SourceSpan {
  std::string file;
  int line_start = 1;
  int col_start = 1;
  int line_end = 1;
  int col_end = 1;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Span covering `a` through `b`.
SourceSpan merge(const SourceSpan& a, const SourceSpan& b);

enum class Severity { Error, Warning, Note };

enum class DiagnosticKind {
  LexError,
  ParseError,
  UnknownIdentifier,
  DuplicateDefinition,
  ForwardReference,
  DimensionMismatch,
  NonMonomialDerivation,
  NonRationalExponent,
  BadIndex,
  InvalidConstant,
};

const char* to_string(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind;
  Severity severity = Severity::Error;
  SourceSpan span;
  std::string message;
};

/// `file:line:col: severity: message`
std::string format(const Diagnostic& d);

std::size_t count_kind(const std::vector<Diagnostic>& diags, DiagnosticKind kind);

}  // namespace newton
