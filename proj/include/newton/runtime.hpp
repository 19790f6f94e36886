#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "newton/ir.hpp"
#include "newton/pi_analysis.hpp"

namespace newton {

/// One set of sensor readings. Values are in the declared unit of each
/// parameter's signal; there is no unit conversion. Components of an
/// indexed parameter are bound as `name@k`.
struct SampleRecord {
  std::unordered_map<std::string, double> values;
  std::optional<double> timestamp;
};

using ConstantTable = std::unordered_map<std::string, double>;

ConstantTable constant_table(const NewtonIR& ir);

/// Tolerance for `~`: passes iff |lhs - rhs| <= max(absolute, relative * max(|lhs|, |rhs|)).
struct ToleranceConfig {
  double relative = 0.01;
  double absolute = 1e-12;

  /// Throws std::invalid_argument unless both values are finite and >= 0.
  void validate() const;
};

enum class EvalErrorKind { UnboundIdentifier, DomainError };

struct EvalError {
  EvalErrorKind kind;
  std::string message;
};

struct EvalResult {
  double value = 0.0;
  std::optional<EvalError> error;

  bool ok() const { return !error.has_value(); }
};

/// IEEE double evaluation. Unit symbols evaluate to 1. `x**(p/q)` is the
/// real q-th root of x to the p: even roots of negatives and zero to a
/// negative power are DomainErrors, as is division by zero.
EvalResult eval_expr(const TypedExpr& e, const SampleRecord& bindings, const ConstantTable& constants);

/// Raises `base` to the exact rational `exponent` with the real-root
/// semantics of eval_expr.
EvalResult rational_power(double base, const Rational& exponent);

struct RelationOutcome {
  std::size_t index = 0;
  bool pass = false;
  double lhs = 0.0;  // NaN when evaluation failed
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / max(|lhs|, |rhs|), 0 if both are 0
  std::string reason;     // set when evaluation failed
};

struct CheckResult {
  std::string invariant;
  bool pass = false;  // conjunction of every relation
  std::vector<RelationOutcome> relations;
  std::optional<double> timestamp;
};

double relative_residual(double lhs, double rhs);
bool relation_holds(RelOp op, double lhs, double rhs, const ToleranceConfig& tol);

CheckResult check_invariant(const InvariantDef& inv, const SampleRecord& rec, const ConstantTable& constants,
                            const ToleranceConfig& tol = {});

class UnknownInvariant : public std::runtime_error {
 public:
  explicit UnknownInvariant(const std::string& name)
      : std::runtime_error("unknown invariant '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Order-preserving map of check_invariant over `records`, evaluated in
/// parallel with OpenMP. A record that cannot be evaluated becomes a failed
/// result carrying the reason. Throws UnknownInvariant.
std::vector<CheckResult> check_stream(const NewtonIR& ir, std::string_view invariant,
                                      std::span<const SampleRecord> records, const ToleranceConfig& tol = {});

/// Single-threaded reference for check_stream; identical results.
std::vector<CheckResult> check_stream_serial(const NewtonIR& ir, std::string_view invariant,
                                             std::span<const SampleRecord> records,
                                             const ToleranceConfig& tol = {});

struct ParamInfo {
  std::string name;
  std::string signal;
  std::optional<std::string> unit_symbol;
  std::vector<std::pair<std::string, Rational>> dimension;  // (base name, exponent)
  std::int64_t components = 1;
};

struct InvariantInfo {
  std::string name;
  std::vector<ParamInfo> params;
  std::size_t relation_count = 0;
  std::vector<RelOp> operators;
  std::size_t quantity_count = 0;  // n, constants included
  std::size_t rank = 0;            // k
  std::vector<PiGroup> pi_groups;
};

/// Throws UnknownInvariant.
InvariantInfo query_invariant(const NewtonIR& ir, std::string_view name);

}  // namespace newton
