#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "newton/ast.hpp"
#include "newton/ir.hpp"

namespace newton {

/// What a name means inside an expression.
struct Binding {
  enum class Kind { Signal, Unit, Constant, Parameter, IndexVariable, Invariant };

  Kind kind = Kind::Constant;
  DimensionSignature dimension;
  std::optional<ComponentRange> range;  // indexed signal/parameter, or an index variable's range
  bool poisoned = false;                // its own declaration failed; references stay silent
};

/// Names visible to check_expr. `derivation` selects the derivation
/// context, where signal names are the operands; elsewhere only values
/// (parameters, constants, unit symbols) may appear.
struct Scope {
  std::unordered_map<std::string, Binding> names;
  std::unordered_set<std::string> declared_later;  // for ForwardReference
  std::unordered_set<std::string> signal_types;    // signal names, for hints in value context
  std::vector<std::string> base_names;             // for printing signatures
  bool derivation = false;
};

struct AnalysisResult {
  std::optional<NewtonIR> ir;  // set iff errors is empty
  std::vector<Diagnostic> errors;

  bool ok() const { return errors.empty(); }
};

/// Resolves declarations in order into a NewtonIR. Derivations, constants
/// and invariants may only reference entities declared earlier. Analysis
/// continues past errors; the complete list is returned.
AnalysisResult analyze(std::span<const ast::Decl> decls);

/// Types `e` bottom-up. On failure appends diagnostics and returns nullopt;
/// a failing subexpression does not produce further diagnostics higher up.
std::optional<TypedExpr> check_expr(const ast::Expr& e, const Scope& scope, std::vector<Diagnostic>& errors);

/// Accepts products, quotients and rational powers of signal references.
/// Returns the NonMonomialDerivation diagnostic for the first offending
/// node, if any.
std::optional<Diagnostic> check_derivation_monomial(const ast::Expr& e);

/// The compile-time rational denoted by an exponent operand: an optionally
/// negated integer literal or a ratio of two such.
std::optional<Rational> rational_exponent(const ast::Expr& e);

}  // namespace newton
