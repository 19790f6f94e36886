#include "newton/ir.hpp"

#include <algorithm>

namespace newton {

const char* to_string(ExprOp op) {
  switch (op) {
    case ExprOp::Number: return "num";
    case ExprOp::Parameter: return "param";
    case ExprOp::Constant: return "const";
    case ExprOp::Unit: return "unit";
    case ExprOp::Signal: return "signal";
    case ExprOp::Negate: return "neg";
    case ExprOp::Add: return "add";
    case ExprOp::Sub: return "sub";
    case ExprOp::Mul: return "mul";
    case ExprOp::Div: return "div";
    case ExprOp::Pow: return "pow";
  }
  return "?";
}

namespace {

template <typename T, typename Pred>
const T* find_in(const std::vector<T>& v, Pred pred) {
  const auto it = std::find_if(v.begin(), v.end(), pred);
  return it == v.end() ? nullptr : &*it;
}

}  // namespace

const SignalDef* NewtonIR::find_signal(std::string_view name) const {
  return find_in(signals, [&](const SignalDef& s) { return s.name == name; });
}

const SignalDef* NewtonIR::find_signal_by_symbol(std::string_view symbol) const {
  return find_in(signals, [&](const SignalDef& s) { return s.unit_symbol && *s.unit_symbol == symbol; });
}

const ConstantDef* NewtonIR::find_constant(std::string_view name) const {
  return find_in(constants, [&](const ConstantDef& c) { return c.name == name; });
}

const InvariantDef* NewtonIR::find_invariant(std::string_view name) const {
  return find_in(invariants, [&](const InvariantDef& i) { return i.name == name; });
}

}  // namespace newton
