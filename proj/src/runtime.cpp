#include "newton/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace newton {

ConstantTable constant_table(const NewtonIR& ir) {
  ConstantTable table;
  for (const auto& c : ir.constants) table.emplace(c.name, c.value);
  return table;
}

void ToleranceConfig::validate() const {
  if (!std::isfinite(relative) || relative < 0.0) {
    throw std::invalid_argument("relative tolerance must be finite and non-negative");
  }
  if (!std::isfinite(absolute) || absolute < 0.0) {
    throw std::invalid_argument("absolute tolerance must be finite and non-negative");
  }
}

namespace {

EvalResult fail(EvalErrorKind kind, std::string message) {
  return EvalResult{std::numeric_limits<double>::quiet_NaN(), EvalError{kind, std::move(message)}};
}

std::string binding_key(const TypedExpr& e) {
  return e.component ? e.name + "@" + std::to_string(*e.component) : e.name;
}

}  // namespace

EvalResult rational_power(double base, const Rational& exponent) {
  const Integer& p = exponent.numerator();
  const Integer& q = exponent.denominator();
  if (base == 0.0 && p < 0) return fail(EvalErrorKind::DomainError, "zero raised to a negative power");
  if (q == 1 && p.fits_slong_p()) return EvalResult{std::pow(base, static_cast<double>(p.get_si())), {}};
  double sign = 1.0;
  if (base < 0.0) {
    if (mpz_even_p(q.get_mpz_t())) {
      return fail(EvalErrorKind::DomainError, "even root of a negative value");
    }
    sign = mpz_odd_p(p.get_mpz_t()) ? -1.0 : 1.0;
  }
  const double magnitude = std::fabs(base);
  if (q == 2 && p == 1) return EvalResult{sign * std::sqrt(magnitude), {}};
  if (q == 3 && p == 1) return EvalResult{sign * std::cbrt(magnitude), {}};
  return EvalResult{sign * std::pow(magnitude, exponent.to_double()), {}};
}

EvalResult eval_expr(const TypedExpr& e, const SampleRecord& bindings, const ConstantTable& constants) {
  switch (e.op) {
    case ExprOp::Number: return EvalResult{e.number, {}};
    case ExprOp::Unit: return EvalResult{1.0, {}};
    case ExprOp::Parameter: {
      const auto key = binding_key(e);
      const auto it = bindings.values.find(key);
      if (it == bindings.values.end()) {
        return fail(EvalErrorKind::UnboundIdentifier, "no value bound for '" + key + "'");
      }
      return EvalResult{it->second, {}};
    }
    case ExprOp::Constant: {
      const auto it = constants.find(e.name);
      if (it == constants.end()) {
        return fail(EvalErrorKind::UnboundIdentifier, "no value for constant '" + e.name + "'");
      }
      return EvalResult{it->second, {}};
    }
    case ExprOp::Signal:
      return fail(EvalErrorKind::UnboundIdentifier, "signal '" + e.name + "' has no runtime value");
    case ExprOp::Negate: {
      auto v = eval_expr(e.operands[0], bindings, constants);
      if (v.ok()) v.value = -v.value;
      return v;
    }
    case ExprOp::Pow: {
      const auto base = eval_expr(e.operands[0], bindings, constants);
      if (!base.ok()) return base;
      return rational_power(base.value, e.exponent);
    }
    case ExprOp::Add:
    case ExprOp::Sub:
    case ExprOp::Mul:
    case ExprOp::Div: {
      const auto lhs = eval_expr(e.operands[0], bindings, constants);
      if (!lhs.ok()) return lhs;
      const auto rhs = eval_expr(e.operands[1], bindings, constants);
      if (!rhs.ok()) return rhs;
      switch (e.op) {
        case ExprOp::Add: return EvalResult{lhs.value + rhs.value, {}};
        case ExprOp::Sub: return EvalResult{lhs.value - rhs.value, {}};
        case ExprOp::Mul: return EvalResult{lhs.value * rhs.value, {}};
        default:
          if (rhs.value == 0.0) return fail(EvalErrorKind::DomainError, "division by zero");
          return EvalResult{lhs.value / rhs.value, {}};
      }
    }
  }
  return fail(EvalErrorKind::DomainError, "malformed expression");
}

double relative_residual(double lhs, double rhs) {
  const double scale = std::max(std::fabs(lhs), std::fabs(rhs));
  if (scale == 0.0) return 0.0;
  return std::fabs(lhs - rhs) / scale;
}

bool relation_holds(RelOp op, double lhs, double rhs, const ToleranceConfig& tol) {
  switch (op) {
    case RelOp::Proportional: {
      const double bound = std::max(tol.absolute, tol.relative * std::max(std::fabs(lhs), std::fabs(rhs)));
      return std::fabs(lhs - rhs) <= bound;
    }
    case RelOp::Less: return lhs < rhs;
    case RelOp::LessEqual: return lhs <= rhs;
    case RelOp::Greater: return lhs > rhs;
    case RelOp::GreaterEqual: return lhs >= rhs;
    case RelOp::Equal: return lhs == rhs;
  }
  return false;
}

CheckResult check_invariant(const InvariantDef& inv, const SampleRecord& rec, const ConstantTable& constants,
                            const ToleranceConfig& tol) {
  CheckResult result;
  result.invariant = inv.name;
  result.timestamp = rec.timestamp;
  result.pass = true;
  result.relations.reserve(inv.relations.size());
  for (std::size_t i = 0; i < inv.relations.size(); ++i) {
    const auto& rel = inv.relations[i];
    RelationOutcome out;
    out.index = i;
    const auto lhs = eval_expr(rel.lhs, rec, constants);
    const auto rhs = eval_expr(rel.rhs, rec, constants);
    out.lhs = lhs.value;
    out.rhs = rhs.value;
    if (!lhs.ok() || !rhs.ok()) {
      out.pass = false;
      out.residual = std::numeric_limits<double>::quiet_NaN();
      out.reason = !lhs.ok() ? lhs.error->message : rhs.error->message;
    } else {
      out.residual = relative_residual(lhs.value, rhs.value);
      out.pass = relation_holds(rel.op, lhs.value, rhs.value, tol);
    }
    result.pass = result.pass && out.pass;
    result.relations.push_back(std::move(out));
  }
  return result;
}

namespace {

const InvariantDef& require_invariant(const NewtonIR& ir, std::string_view name) {
  const InvariantDef* inv = ir.find_invariant(name);
  if (!inv) throw UnknownInvariant(std::string(name));
  return *inv;
}

}  // namespace

std::vector<CheckResult> check_stream(const NewtonIR& ir, std::string_view invariant,
                                      std::span<const SampleRecord> records, const ToleranceConfig& tol) {
  const InvariantDef& inv = require_invariant(ir, invariant);
  const ConstantTable constants = constant_table(ir);
  std::vector<CheckResult> results(records.size());
  const auto n = static_cast<std::ptrdiff_t>(records.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    results[static_cast<std::size_t>(i)] = check_invariant(inv, records[static_cast<std::size_t>(i)], constants, tol);
  }
  return results;
}

std::vector<CheckResult> check_stream_serial(const NewtonIR& ir, std::string_view invariant,
                                             std::span<const SampleRecord> records, const ToleranceConfig& tol) {
  const InvariantDef& inv = require_invariant(ir, invariant);
  const ConstantTable constants = constant_table(ir);
  std::vector<CheckResult> results;
  results.reserve(records.size());
  for (const auto& rec : records) results.push_back(check_invariant(inv, rec, constants, tol));
  return results;
}

InvariantInfo query_invariant(const NewtonIR& ir, std::string_view name) {
  const InvariantDef& inv = require_invariant(ir, name);
  InvariantInfo info;
  info.name = inv.name;
  for (const auto& p : inv.params) {
    ParamInfo pi;
    pi.name = p.name;
    pi.signal = p.signal;
    if (const SignalDef* sig = ir.find_signal(p.signal)) pi.unit_symbol = sig->unit_symbol;
    for (const auto& [id, e] : p.dimension.terms()) {
      pi.dimension.emplace_back(id.value < ir.fundamentals.size() ? ir.fundamentals[id.value] : "#" + std::to_string(id.value), e);
    }
    pi.components = p.range ? p.range->count() : 1;
    info.params.push_back(std::move(pi));
  }
  info.relation_count = inv.relations.size();
  for (const auto& rel : inv.relations) info.operators.push_back(rel.op);
  const auto m = dimension_matrix(inv, true);
  info.quantity_count = m.column_count();
  info.rank = rank(m);
  info.pi_groups = pi_groups(m);
  return info;
}

}  // namespace newton
