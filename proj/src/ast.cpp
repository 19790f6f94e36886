#include "newton/ast.hpp"

#include <algorithm>

namespace newton::ast {

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Pow: return "**";
  }
  return "?";
}

const char* to_string(RelOp op) {
  switch (op) {
    case RelOp::Proportional: return "~";
    case RelOp::Less: return "<";
    case RelOp::LessEqual: return "<=";
    case RelOp::Greater: return ">";
    case RelOp::GreaterEqual: return ">=";
    case RelOp::Equal: return "==";
  }
  return "?";
}

std::optional<RelOp> parse_relop(std::string_view text) {
  if (text == "~") return RelOp::Proportional;
  if (text == "<") return RelOp::Less;
  if (text == "<=") return RelOp::LessEqual;
  if (text == ">") return RelOp::Greater;
  if (text == ">=") return RelOp::GreaterEqual;
  if (text == "==") return RelOp::Equal;
  return std::nullopt;
}

Expr Expr::number(std::string lexeme, bool integer, SourceSpan span) {
  Expr e;
  e.kind = ExprKind::Number;
  e.text = std::move(lexeme);
  e.is_integer = integer;
  e.span = std::move(span);
  return e;
}

Expr Expr::identifier(std::string name, SourceSpan span) {
  Expr e;
  e.kind = ExprKind::Identifier;
  e.text = std::move(name);
  e.span = std::move(span);
  return e;
}

Expr Expr::index(Expr base, Expr idx, SourceSpan span) {
  Expr e;
  e.kind = ExprKind::Index;
  e.children.push_back(std::move(base));
  e.children.push_back(std::move(idx));
  e.span = std::move(span);
  return e;
}

Expr Expr::negate(Expr operand, SourceSpan span) {
  Expr e;
  e.kind = ExprKind::Negate;
  e.children.push_back(std::move(operand));
  e.span = std::move(span);
  return e;
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs, SourceSpan span) {
  Expr e;
  e.kind = ExprKind::Binary;
  e.op = op;
  e.children.push_back(std::move(lhs));
  e.children.push_back(std::move(rhs));
  e.span = std::move(span);
  return e;
}

const std::string& decl_name(const Decl& d) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, d);
}

const SourceSpan& decl_span(const Decl& d) {
  return std::visit([](const auto& x) -> const SourceSpan& { return x.span; }, d);
}

bool equivalent(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.text != b.text || a.children.size() != b.children.size()) return false;
  if (a.kind == ExprKind::Binary && a.op != b.op) return false;
  if (a.kind == ExprKind::Number && a.is_integer != b.is_integer) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!equivalent(a.children[i], b.children[i])) return false;
  }
  return true;
}

bool equivalent(const Relation& a, const Relation& b) {
  return a.op == b.op && equivalent(a.lhs, b.lhs) && equivalent(a.rhs, b.rhs);
}

namespace {

bool equivalent_decl(const SignalDecl& a, const SignalDecl& b) {
  if (a.name != b.name || a.symbol != b.symbol) return false;
  if (a.index_range.has_value() != b.index_range.has_value()) return false;
  if (a.index_range && (a.index_range->variable != b.index_range->variable ||
                        a.index_range->lo != b.index_range->lo || a.index_range->hi != b.index_range->hi)) {
    return false;
  }
  if (a.name_field.has_value() != b.name_field.has_value()) return false;
  if (a.name_field &&
      (a.name_field->text != b.name_field->text || a.name_field->language != b.name_field->language)) {
    return false;
  }
  if (a.derivation.has_value() != b.derivation.has_value()) return false;
  return !a.derivation || equivalent(*a.derivation, *b.derivation);
}

bool equivalent_decl(const ConstantDecl& a, const ConstantDecl& b) {
  return a.name == b.name && equivalent(a.value, b.value);
}

bool equivalent_decl(const InvariantDecl& a, const InvariantDecl& b) {
  if (a.name != b.name || a.params.size() != b.params.size() || a.body.size() != b.body.size()) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].name != b.params[i].name || a.params[i].type_name != b.params[i].type_name) return false;
  }
  for (std::size_t i = 0; i < a.body.size(); ++i) {
    if (!equivalent(a.body[i], b.body[i])) return false;
  }
  return true;
}

// Binding strength; higher binds tighter.
constexpr int kAdditive = 1;
constexpr int kMultiplicative = 2;
constexpr int kUnary = 3;
constexpr int kPower = 4;
constexpr int kIndex = 5;
constexpr int kPrimary = 6;

int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Number:
    case ExprKind::Identifier: return kPrimary;
    case ExprKind::Index: return kIndex;
    case ExprKind::Negate: return kUnary;
    case ExprKind::Binary:
      switch (e.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return kAdditive;
        case BinaryOp::Mul:
        case BinaryOp::Div: return kMultiplicative;
        case BinaryOp::Pow: return kPower;
      }
  }
  return kPrimary;
}

void print_into(const Expr& e, int min_prec, std::string& out) {
  const bool parens = precedence(e) < min_prec;
  if (parens) out += '(';
  switch (e.kind) {
    case ExprKind::Number:
    case ExprKind::Identifier: out += e.text; break;
    case ExprKind::Index:
      print_into(e.children[0], kPrimary, out);
      out += '@';
      print_into(e.children[1], kPrimary, out);
      break;
    case ExprKind::Negate:
      out += '-';
      print_into(e.children[0], kUnary, out);
      break;
    case ExprKind::Binary: {
      const int p = precedence(e);
      if (e.op == BinaryOp::Pow) {
        print_into(e.children[0], kIndex, out);
        out += "**";
        print_into(e.children[1], kUnary, out);
      } else {
        print_into(e.children[0], p, out);
        out += p == kAdditive ? " " : "";
        out += to_string(e.op);
        out += p == kAdditive ? " " : "";
        print_into(e.children[1], p + 1, out);
      }
      break;
    }
  }
  if (parens) out += ')';
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

}  // namespace

bool equivalent(const Decl& a, const Decl& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        return equivalent_decl(x, std::get<T>(b));
      },
      a);
}

bool equivalent(const std::vector<Decl>& a, const std::vector<Decl>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const Decl& x, const Decl& y) { return equivalent(x, y); });
}

std::string print(const Expr& e) {
  std::string out;
  print_into(e, kAdditive, out);
  return out;
}

std::string print(const Relation& r) { return print(r.lhs) + " " + to_string(r.op) + " " + print(r.rhs); }

std::string print(const Decl& d) {
  struct Printer {
    std::string operator()(const SignalDecl& s) const {
      std::string out = s.name + " : signal";
      if (s.index_range) {
        out += "(" + s.index_range->variable + ": " + std::to_string(s.index_range->lo) + " to " +
               std::to_string(s.index_range->hi) + ")";
      }
      out += " = {\n";
      if (s.name_field) {
        out += "    name = " + quote(s.name_field->text);
        if (!s.name_field->language.empty()) out += " " + s.name_field->language;
        out += ";\n";
      }
      if (s.symbol) out += "    symbol = " + *s.symbol + ";\n";
      out += "    derivation = " + (s.derivation ? print(*s.derivation) : std::string("none")) + ";\n";
      return out + "}\n";
    }
    std::string operator()(const ConstantDecl& c) const { return c.name + " : constant = " + print(c.value) + ";\n"; }
    std::string operator()(const InvariantDecl& inv) const {
      std::string out = inv.name + " : invariant(";
      for (std::size_t i = 0; i < inv.params.size(); ++i) {
        if (i) out += ", ";
        out += inv.params[i].name + ": " + inv.params[i].type_name;
      }
      out += ") = {\n";
      for (std::size_t i = 0; i < inv.body.size(); ++i) {
        out += "    " + print(inv.body[i]);
        out += i + 1 < inv.body.size() ? ",\n" : "\n";
      }
      return out + "}\n";
    }
  };
  return std::visit(Printer{}, d);
}

std::string print(const std::vector<Decl>& decls) {
  std::string out;
  for (std::size_t i = 0; i < decls.size(); ++i) {
    if (i) out += '\n';
    out += print(decls[i]);
  }
  return out;
}

}  // namespace newton::ast
