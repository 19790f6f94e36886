#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "newton/ast.hpp"
#include "newton/dimension.hpp"

namespace newton {

using ast::RelOp;

/// Resolved operation of a TypedExpr node.
enum class ExprOp {
  Number,     // literal; `number`
  Parameter,  // invariant parameter; `name`, optional `component`
  Constant,   // named constant; `name`
  Unit,       // unit symbol, evaluates to 1; `name`
  Signal,     // signal reference inside a derivation; `name`
  Negate,
  Add,
  Sub,
  Mul,
  Div,
  Pow,  // operands[0] raised to `exponent`
};

const char* to_string(ExprOp op);

/// Expression tree decorated with a dimension at every node.
struct TypedExpr {
  ExprOp op = ExprOp::Number;
  double number = 0.0;
  std::string name;
  std::optional<std::int64_t> component;
  Rational exponent;
  DimensionSignature dimension;
  std::vector<TypedExpr> operands;

  friend bool operator==(const TypedExpr&, const TypedExpr&) = default;
};

/// Inclusive index range of a multi-component signal.
struct ComponentRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  std::int64_t count() const { return hi - lo + 1; }
  bool contains(std::int64_t i) const { return lo <= i && i <= hi; }
  friend bool operator==(const ComponentRange&, const ComponentRange&) = default;
};

struct UnitName {
  std::string text;
  std::string language;
  friend bool operator==(const UnitName&, const UnitName&) = default;
};

struct SignalDef {
  std::uint32_t id = 0;  // position in the signal table
  std::string name;
  std::optional<UnitName> unit_name;
  std::optional<std::string> unit_symbol;
  bool is_fundamental = false;
  std::optional<BaseSignalId> base;  // set iff fundamental
  DimensionSignature dimension;
  std::optional<ComponentRange> range;  // set iff declared with signal(i: lo to hi)

  std::int64_t components() const { return range ? range->count() : 1; }
  friend bool operator==(const SignalDef&, const SignalDef&) = default;
};

struct ConstantDef {
  std::string name;
  double value = 0.0;
  DimensionSignature dimension;
  friend bool operator==(const ConstantDef&, const ConstantDef&) = default;
};

struct InvariantParam {
  std::string name;
  std::string signal;  // name of the parameter's signal type
  DimensionSignature dimension;
  std::optional<ComponentRange> range;
  friend bool operator==(const InvariantParam&, const InvariantParam&) = default;
};

struct InvariantRelation {
  TypedExpr lhs;
  RelOp op = RelOp::Proportional;
  TypedExpr rhs;
  friend bool operator==(const InvariantRelation&, const InvariantRelation&) = default;
};

/// A named conjunction of dimensionally homogeneous relations.
struct InvariantDef {
  std::string name;
  std::vector<InvariantParam> params;
  std::vector<InvariantRelation> relations;
  friend bool operator==(const InvariantDef&, const InvariantDef&) = default;
};

/// Resolved, dimension-checked form of a specification. Immutable once
/// built; safe to share between threads.
struct NewtonIR {
  std::vector<std::string> fundamentals;  // indexed by BaseSignalId
  std::vector<SignalDef> signals;
  std::vector<ConstantDef> constants;
  std::vector<InvariantDef> invariants;

  const SignalDef* find_signal(std::string_view name) const;
  const SignalDef* find_signal_by_symbol(std::string_view symbol) const;
  const ConstantDef* find_constant(std::string_view name) const;
  const InvariantDef* find_invariant(std::string_view name) const;

  friend bool operator==(const NewtonIR&, const NewtonIR&) = default;
};

}  // namespace newton
