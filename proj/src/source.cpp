#include "newton/source.hpp"

#include <algorithm>

namespace newton {

SourceSpan merge(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan s = a;
  s.line_end = b.line_end;
  s.col_end = b.col_end;
  return s;
}

const char* to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::LexError: return "lex error";
    case DiagnosticKind::ParseError: return "parse error";
    case DiagnosticKind::UnknownIdentifier: return "unknown identifier";
    case DiagnosticKind::DuplicateDefinition: return "duplicate definition";
    case DiagnosticKind::ForwardReference: return "forward reference";
    case DiagnosticKind::DimensionMismatch: return "dimension mismatch";
    case DiagnosticKind::NonMonomialDerivation: return "non-monomial derivation";
    case DiagnosticKind::NonRationalExponent: return "non-rational exponent";
    case DiagnosticKind::BadIndex: return "bad index";
    case DiagnosticKind::InvalidConstant: return "invalid constant";
  }
  return "error";
}

std::string format(const Diagnostic& d) {
  const char* sev = d.severity == Severity::Error     ? "error"
                    : d.severity == Severity::Warning ? "warning"
                                                      : "note";
  return d.span.file + ":" + std::to_string(d.span.line_start) + ":" +
         std::to_string(d.span.col_start) + ": " + sev + ": " + to_string(d.kind) + ": " +
         d.message;
}

std::size_t count_kind(const std::vector<Diagnostic>& diags, DiagnosticKind kind) {
  return static_cast<std::size_t>(
      std::count_if(diags.begin(), diags.end(), [kind](const Diagnostic& d) { return d.kind == kind; }));
}

}  // namespace newton
