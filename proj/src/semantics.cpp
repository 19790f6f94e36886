#include "newton/semantics.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <unordered_map>

#include "newton/runtime.hpp"

namespace newton {

namespace {

using ast::BinaryOp;
using ast::Expr;
using ast::ExprKind;

Diagnostic make_error(DiagnosticKind kind, const SourceSpan& span, std::string message) {
  return Diagnostic{kind, Severity::Error, span, std::move(message)};
}

std::string describe(const DimensionSignature& d, const Scope& scope) { return to_string(d, scope.base_names); }

class ExprChecker {
 public:
  ExprChecker(const Scope& scope, std::vector<Diagnostic>& errors) : scope_(scope), errors_(errors) {}

  std::optional<TypedExpr> check(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Number: return number(e);
      case ExprKind::Identifier: return identifier(e);
      case ExprKind::Index: return index(e);
      case ExprKind::Negate: {
        auto operand = check(e.children[0]);
        if (!operand) return std::nullopt;
        TypedExpr t;
        t.op = ExprOp::Negate;
        t.dimension = operand->dimension;
        t.operands.push_back(std::move(*operand));
        return t;
      }
      case ExprKind::Binary: return binary(e);
    }
    return std::nullopt;
  }

 private:
  std::optional<TypedExpr> number(const Expr& e) {
    TypedExpr t;
    t.op = ExprOp::Number;
    t.number = std::strtod(e.text.c_str(), nullptr);
    if (!std::isfinite(t.number)) {
      errors_.push_back(make_error(DiagnosticKind::InvalidConstant, e.span,
                                   "numeric literal '" + e.text + "' is out of range"));
      return std::nullopt;
    }
    return t;
  }

  const Binding* lookup(const Expr& id) {
    const auto it = scope_.names.find(id.text);
    if (it != scope_.names.end()) return &it->second;
    if (scope_.declared_later.count(id.text)) {
      errors_.push_back(make_error(DiagnosticKind::ForwardReference, id.span,
                                   "'" + id.text + "' is used before its declaration"));
    } else if (!scope_.derivation && scope_.signal_types.count(id.text)) {
      errors_.push_back(make_error(DiagnosticKind::UnknownIdentifier, id.span,
                                   "'" + id.text +
                                       "' names a signal type, not a value; use a parameter or its unit symbol"));
    } else {
      errors_.push_back(make_error(DiagnosticKind::UnknownIdentifier, id.span, "'" + id.text + "' is not defined"));
    }
    return nullptr;
  }

  bool kind_allowed(const Binding& b, const Expr& id) {
    using K = Binding::Kind;
    if (b.kind == K::Invariant) {
      errors_.push_back(make_error(DiagnosticKind::UnknownIdentifier, id.span,
                                   "'" + id.text + "' is an invariant; invariants cannot be referenced"));
      return false;
    }
    if (scope_.derivation && b.kind != K::Signal && b.kind != K::IndexVariable) {
      errors_.push_back(make_error(DiagnosticKind::UnknownIdentifier, id.span,
                                   "'" + id.text + "' is not a signal; derivations may only combine signals"));
      return false;
    }
    if (!scope_.derivation && b.kind == K::Signal) {
      errors_.push_back(make_error(DiagnosticKind::UnknownIdentifier, id.span,
                                   "'" + id.text +
                                       "' names a signal type, not a value; use a parameter or its unit symbol"));
      return false;
    }
    return true;
  }

  static ExprOp op_for(Binding::Kind k) {
    switch (k) {
      case Binding::Kind::Signal: return ExprOp::Signal;
      case Binding::Kind::Unit: return ExprOp::Unit;
      case Binding::Kind::Constant: return ExprOp::Constant;
      case Binding::Kind::Parameter: return ExprOp::Parameter;
      case Binding::Kind::IndexVariable:
      case Binding::Kind::Invariant: break;
    }
    return ExprOp::Number;
  }

  std::optional<TypedExpr> identifier(const Expr& e) {
    const Binding* b = lookup(e);
    if (!b || !kind_allowed(*b, e)) return std::nullopt;
    if (b->poisoned) return std::nullopt;
    if (b->kind == Binding::Kind::IndexVariable) {
      errors_.push_back(make_error(DiagnosticKind::BadIndex, e.span,
                                   "index variable '" + e.text + "' may only appear after '@'"));
      return std::nullopt;
    }
    if (b->kind == Binding::Kind::Parameter && b->range) {
      errors_.push_back(make_error(DiagnosticKind::BadIndex, e.span,
                                   "parameter '" + e.text + "' has " + std::to_string(b->range->count()) +
                                       " components; select one with '@'"));
      return std::nullopt;
    }
    TypedExpr t;
    t.op = op_for(b->kind);
    t.name = e.text;
    t.dimension = b->dimension;
    return t;
  }

  std::optional<TypedExpr> index(const Expr& e) {
    const Expr& base = e.children[0];
    const Expr& idx = e.children[1];
    const Binding* b = lookup(base);
    if (!b || !kind_allowed(*b, base)) return std::nullopt;
    if (b->poisoned) return std::nullopt;
    if ((b->kind != Binding::Kind::Signal && b->kind != Binding::Kind::Parameter) || !b->range) {
      errors_.push_back(make_error(DiagnosticKind::BadIndex, e.span,
                                   "'" + base.text + "' is not a multi-component signal and cannot be indexed"));
      return std::nullopt;
    }
    const ComponentRange range = *b->range;
    TypedExpr t;
    t.op = op_for(b->kind);
    t.name = base.text;
    t.dimension = b->dimension;
    if (idx.kind == ExprKind::Number) {
      std::int64_t k = 0;
      const auto [ptr, ec] = std::from_chars(idx.text.data(), idx.text.data() + idx.text.size(), k);
      if (ec != std::errc() || ptr != idx.text.data() + idx.text.size() || !range.contains(k)) {
        errors_.push_back(make_error(DiagnosticKind::BadIndex, idx.span,
                                     "index " + idx.text + " is outside the range " + std::to_string(range.lo) +
                                         " to " + std::to_string(range.hi) + " of '" + base.text + "'"));
        return std::nullopt;
      }
      if (t.op == ExprOp::Parameter) t.component = k;
      return t;
    }
    const auto it = scope_.names.find(idx.text);
    if (it == scope_.names.end() || it->second.kind != Binding::Kind::IndexVariable) {
      errors_.push_back(make_error(DiagnosticKind::BadIndex, idx.span,
                                   "'" + idx.text + "' is not an index variable in scope"));
      return std::nullopt;
    }
    const ComponentRange var = *it->second.range;
    if (!range.contains(var.lo) || !range.contains(var.hi)) {
      errors_.push_back(make_error(DiagnosticKind::BadIndex, idx.span,
                                   "index variable '" + idx.text + "' ranges beyond the components of '" +
                                       base.text + "'"));
      return std::nullopt;
    }
    if (t.op == ExprOp::Parameter) {
      errors_.push_back(make_error(DiagnosticKind::BadIndex, idx.span,
                                   "parameter components must be selected with an integer index"));
      return std::nullopt;
    }
    return t;
  }

  std::optional<TypedExpr> binary(const Expr& e) {
    if (e.op == BinaryOp::Pow) {
      auto base = check(e.children[0]);
      const auto exponent = rational_exponent(e.children[1]);
      if (!exponent) {
        errors_.push_back(make_error(DiagnosticKind::NonRationalExponent, e.children[1].span,
                                     "exponent '" + ast::print(e.children[1]) +
                                         "' is not a compile-time rational such as -2 or (1/2)"));
        return std::nullopt;
      }
      if (!base) return std::nullopt;
      TypedExpr t;
      t.op = ExprOp::Pow;
      t.exponent = *exponent;
      t.dimension = dim_pow(base->dimension, *exponent);
      t.operands.push_back(std::move(*base));
      return t;
    }
    auto lhs = check(e.children[0]);
    auto rhs = check(e.children[1]);
    if (!lhs || !rhs) return std::nullopt;
    TypedExpr t;
    switch (e.op) {
      case BinaryOp::Add:
      case BinaryOp::Sub:
        if (lhs->dimension != rhs->dimension) {
          errors_.push_back(make_error(DiagnosticKind::DimensionMismatch, e.span,
                                       std::string("operands of '") + ast::to_string(e.op) + "' have dimensions " +
                                           describe(lhs->dimension, scope_) + " and " +
                                           describe(rhs->dimension, scope_)));
          return std::nullopt;
        }
        t.op = e.op == BinaryOp::Add ? ExprOp::Add : ExprOp::Sub;
        t.dimension = lhs->dimension;
        break;
      case BinaryOp::Mul:
        t.op = ExprOp::Mul;
        t.dimension = dim_mul(lhs->dimension, rhs->dimension);
        break;
      case BinaryOp::Div:
        t.op = ExprOp::Div;
        t.dimension = dim_div(lhs->dimension, rhs->dimension);
        break;
      case BinaryOp::Pow: break;
    }
    t.operands.push_back(std::move(*lhs));
    t.operands.push_back(std::move(*rhs));
    return t;
  }

  const Scope& scope_;
  std::vector<Diagnostic>& errors_;
};

// ---------------------------------------------------------------------------

class Analyzer {
 public:
  explicit Analyzer(std::span<const ast::Decl> decls) : decls_(decls) {}

  AnalysisResult run() {
    collect_names();
    for (std::size_t i = 0; i < decls_.size(); ++i) {
      if (skip_.count(i)) continue;
      std::visit([&](const auto& d) { analyze_decl(d); }, decls_[i]);
      retire_later(decls_[i]);
    }
    AnalysisResult result;
    result.errors = std::move(errors_);
    if (result.errors.empty()) result.ir = std::move(ir_);
    return result;
  }

 private:
  // Pass one: every global name with its first declaration. Later
  // duplicates are reported and their declarations skipped.
  void collect_names() {
    std::unordered_map<std::string, SourceSpan> seen;
    auto claim = [&](const std::string& name, const SourceSpan& span, std::size_t decl) {
      const auto [it, inserted] = seen.emplace(name, span);
      if (!inserted) {
        errors_.push_back(make_error(DiagnosticKind::DuplicateDefinition, span,
                                     "'" + name + "' is already defined at " + it->second.file + ":" +
                                         std::to_string(it->second.line_start) + ":" +
                                         std::to_string(it->second.col_start)));
        skip_.insert(decl);
        return false;
      }
      global_.declared_later.insert(name);
      return true;
    };
    for (std::size_t i = 0; i < decls_.size(); ++i) {
      const auto& d = decls_[i];
      if (const auto* s = std::get_if<ast::SignalDecl>(&d)) {
        if (claim(s->name, s->span, i) && s->symbol) claim(*s->symbol, s->symbol_span, i);
        signal_types_.insert(s->name);
      } else {
        claim(ast::decl_name(d), ast::decl_span(d), i);
      }
    }
  }

  void retire_later(const ast::Decl& d) {
    global_.declared_later.erase(ast::decl_name(d));
    if (const auto* s = std::get_if<ast::SignalDecl>(&d); s && s->symbol) global_.declared_later.erase(*s->symbol);
  }

  Scope value_scope() const {
    Scope s;
    s.declared_later = global_.declared_later;
    s.signal_types = signal_types_;
    s.base_names = ir_.fundamentals;
    for (const auto& [name, b] : global_.names) {
      if (b.kind != Binding::Kind::Signal) s.names.emplace(name, b);
    }
    return s;
  }

  void analyze_decl(const ast::SignalDecl& d) {
    SignalDef sig;
    sig.id = static_cast<std::uint32_t>(ir_.signals.size());
    sig.name = d.name;
    if (d.name_field) sig.unit_name = UnitName{d.name_field->text, d.name_field->language};
    sig.unit_symbol = d.symbol;
    bool failed = false;
    if (d.index_range) {
      if (d.index_range->lo > d.index_range->hi) {
        errors_.push_back(make_error(DiagnosticKind::BadIndex, d.index_range->span,
                                     "empty index range " + std::to_string(d.index_range->lo) + " to " +
                                         std::to_string(d.index_range->hi)));
        failed = true;
      } else {
        sig.range = ComponentRange{d.index_range->lo, d.index_range->hi};
      }
    }
    if (!d.derivation) {
      sig.is_fundamental = true;
      sig.base = BaseSignalId{static_cast<std::uint32_t>(ir_.fundamentals.size())};
      sig.dimension = DimensionSignature::base(*sig.base);
      ir_.fundamentals.push_back(d.name);
    } else if (auto bad = check_derivation_monomial(*d.derivation)) {
      errors_.push_back(std::move(*bad));
      failed = true;
    } else {
      Scope scope;
      scope.derivation = true;
      scope.declared_later = global_.declared_later;
      scope.base_names = ir_.fundamentals;
      for (const auto& [name, b] : global_.names) {
        if (b.kind == Binding::Kind::Signal) scope.names.emplace(name, b);
      }
      if (d.index_range) {
        Binding var;
        var.kind = Binding::Kind::IndexVariable;
        var.range = ComponentRange{d.index_range->lo, d.index_range->hi};
        scope.names.insert_or_assign(d.index_range->variable, var);
      }
      if (auto typed = check_expr(*d.derivation, scope, errors_)) {
        sig.dimension = typed->dimension;
      } else {
        failed = true;
      }
    }

    Binding b;
    b.kind = Binding::Kind::Signal;
    b.dimension = sig.dimension;
    b.range = sig.range;
    b.poisoned = failed;
    global_.names.insert_or_assign(d.name, b);
    if (d.symbol) {
      Binding u;
      u.kind = Binding::Kind::Unit;
      u.dimension = sig.dimension;
      u.poisoned = failed;
      global_.names.insert_or_assign(*d.symbol, u);
    }
    if (!failed) ir_.signals.push_back(std::move(sig));
  }

  void analyze_decl(const ast::ConstantDecl& d) {
    Binding b;
    b.kind = Binding::Kind::Constant;
    const auto typed = check_expr(d.value, value_scope(), errors_);
    if (!typed) {
      b.poisoned = true;
    } else {
      const EvalResult v = eval_expr(*typed, SampleRecord{}, constants_);
      if (!v.ok() || !std::isfinite(v.value)) {
        errors_.push_back(make_error(DiagnosticKind::InvalidConstant, d.value.span,
                                     "constant '" + d.name + "' does not evaluate to a finite number" +
                                         (v.ok() ? std::string() : ": " + v.error->message)));
        b.poisoned = true;
      } else {
        b.dimension = typed->dimension;
        constants_[d.name] = v.value;
        ir_.constants.push_back(ConstantDef{d.name, v.value, typed->dimension});
      }
    }
    global_.names.insert_or_assign(d.name, b);
  }

  void analyze_decl(const ast::InvariantDecl& d) {
    Scope scope = value_scope();
    InvariantDef inv;
    inv.name = d.name;
    bool failed = false;
    std::unordered_map<std::string, SourceSpan> param_names;
    for (const auto& p : d.params) {
      if (!param_names.emplace(p.name, p.span).second) {
        errors_.push_back(make_error(DiagnosticKind::DuplicateDefinition, p.span,
                                     "parameter '" + p.name + "' is declared twice"));
        failed = true;
        continue;
      }
      if (global_.names.count(p.name) || global_.declared_later.count(p.name)) {
        errors_.push_back(make_error(DiagnosticKind::DuplicateDefinition, p.span,
                                     "parameter '" + p.name + "' collides with a global name"));
        failed = true;
        continue;
      }
      Binding param;
      param.kind = Binding::Kind::Parameter;
      const auto it = global_.names.find(p.type_name);
      if (it == global_.names.end() || it->second.kind != Binding::Kind::Signal) {
        if (it != global_.names.end()) {
          errors_.push_back(make_error(DiagnosticKind::UnknownIdentifier, p.span,
                                       "parameter type '" + p.type_name + "' is not a signal type"));
        } else if (global_.declared_later.count(p.type_name)) {
          errors_.push_back(make_error(DiagnosticKind::ForwardReference, p.span,
                                       "signal type '" + p.type_name + "' is used before its declaration"));
        } else {
          errors_.push_back(make_error(DiagnosticKind::UnknownIdentifier, p.span,
                                       "unknown signal type '" + p.type_name + "'"));
        }
        param.poisoned = true;
        failed = true;
      } else {
        param.dimension = it->second.dimension;
        param.range = it->second.range;
        param.poisoned = it->second.poisoned;
        failed = failed || param.poisoned;
        inv.params.push_back(InvariantParam{p.name, p.type_name, param.dimension, param.range});
      }
      scope.names.insert_or_assign(p.name, param);
    }
    for (const auto& rel : d.body) {
      auto lhs = check_expr(rel.lhs, scope, errors_);
      auto rhs = check_expr(rel.rhs, scope, errors_);
      if (!lhs || !rhs) {
        failed = true;
        continue;
      }
      if (lhs->dimension != rhs->dimension) {
        errors_.push_back(make_error(DiagnosticKind::DimensionMismatch, rel.span,
                                     std::string("'") + ast::to_string(rel.op) + "' relates " +
                                         describe(lhs->dimension, scope) + " to " + describe(rhs->dimension, scope)));
        failed = true;
        continue;
      }
      inv.relations.push_back(InvariantRelation{std::move(*lhs), rel.op, std::move(*rhs)});
    }
    Binding b;
    b.kind = Binding::Kind::Invariant;
    global_.names.insert_or_assign(d.name, b);
    if (!failed) ir_.invariants.push_back(std::move(inv));
  }

  std::span<const ast::Decl> decls_;
  Scope global_;
  std::unordered_set<std::string> signal_types_;
  std::unordered_set<std::size_t> skip_;
  ConstantTable constants_;
  NewtonIR ir_;
  std::vector<Diagnostic> errors_;
};

}  // namespace

std::optional<Rational> rational_exponent(const ast::Expr& e) {
  switch (e.kind) {
    case ExprKind::Number:
      if (!e.is_integer) return std::nullopt;
      return Rational(Integer(e.text, 10));
    case ExprKind::Negate: {
      auto inner = rational_exponent(e.children[0]);
      if (!inner) return std::nullopt;
      return -*inner;
    }
    case ExprKind::Binary: {
      if (e.op != BinaryOp::Div) return std::nullopt;
      auto num = rational_exponent(e.children[0]);
      auto den = rational_exponent(e.children[1]);
      if (!num || !den || den->is_zero()) return std::nullopt;
      return *num / *den;
    }
    default: return std::nullopt;
  }
}

std::optional<Diagnostic> check_derivation_monomial(const ast::Expr& e) {
  switch (e.kind) {
    case ExprKind::Identifier:
    case ExprKind::Index: return std::nullopt;
    case ExprKind::Number:
      return make_error(DiagnosticKind::NonMonomialDerivation, e.span,
                        "numeric literal '" + e.text + "' in a derivation; derivations combine signals only");
    case ExprKind::Negate:
      return make_error(DiagnosticKind::NonMonomialDerivation, e.span, "negation is not allowed in a derivation");
    case ExprKind::Binary:
      switch (e.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
          return make_error(DiagnosticKind::NonMonomialDerivation, e.span,
                            std::string("'") + ast::to_string(e.op) + "' makes the derivation a non-monomial");
        case BinaryOp::Pow: return check_derivation_monomial(e.children[0]);
        case BinaryOp::Mul:
        case BinaryOp::Div:
          if (auto bad = check_derivation_monomial(e.children[0])) return bad;
          return check_derivation_monomial(e.children[1]);
      }
  }
  return std::nullopt;
}

std::optional<TypedExpr> check_expr(const ast::Expr& e, const Scope& scope, std::vector<Diagnostic>& errors) {
  return ExprChecker(scope, errors).check(e);
}

AnalysisResult analyze(std::span<const ast::Decl> decls) { return Analyzer(decls).run(); }

}  // namespace newton
