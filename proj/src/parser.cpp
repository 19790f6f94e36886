#include "newton/parser.hpp"

#include <charconv>
#include <optional>
#include <string>

namespace newton {

namespace {

using ast::BinaryOp;
using ast::Expr;
using ast::ExprKind;

struct ParseFailure {};

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) : toks_(tokens) {}

  ParseResult run() {
    while (!at_end()) {
      const std::size_t decl_start = pos_;
      try {
        result_.decls.push_back(declaration());
      } catch (const ParseFailure&) {
        synchronize(decl_start);
      }
    }
    return std::move(result_);
  }

 private:
  bool at_end() const { return pos_ >= toks_.size(); }
  const Token* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < toks_.size() ? &toks_[pos_ + ahead] : nullptr;
  }
  const Token& take() { return toks_[pos_++]; }

  bool check_punct(std::string_view p) const { return peek() && peek()->is_punct(p); }
  bool check_op(std::string_view p) const { return peek() && peek()->is_op(p); }
  bool check_kind(TokenKind k) const { return peek() && peek()->kind == k; }

  bool is_decl_header(std::size_t i) const {
    if (i + 2 >= toks_.size()) return false;
    const auto& kw = toks_[i + 2];
    return toks_[i].kind == TokenKind::Identifier && toks_[i + 1].is_punct(":") &&
           (kw.is_keyword("signal") || kw.is_keyword("constant") || kw.is_keyword("invariant"));
  }

  void synchronize(std::size_t decl_start) {
    std::size_t i = std::max(pos_, decl_start + 1);
    while (i < toks_.size() && !is_decl_header(i)) ++i;
    pos_ = i;
  }

  // A missing closer or terminator is reported where it should have been,
  // at the end of the previous token, when the next token is on a later line.
  SourceSpan error_span(bool missing_closer) const {
    const bool have_prev = pos_ > 0 && pos_ - 1 < toks_.size();
    const bool anchor_prev = missing_closer || is_decl_header(pos_);
    if (!at_end() &&
        (!have_prev || !anchor_prev || toks_[pos_].span.line_start <= toks_[pos_ - 1].span.line_end)) {
      return toks_[pos_].span;
    }
    if (have_prev) {
      const auto& prev = toks_[pos_ - 1].span;
      return SourceSpan{prev.file, prev.line_end, prev.col_end, prev.line_end, prev.col_end};
    }
    return SourceSpan{toks_.empty() ? std::string() : toks_.front().span.file, 1, 1, 1, 1};
  }

  [[noreturn]] void fail(const std::string& expected, bool missing_closer = false) {
    std::string found = at_end() ? "end of input" : "'" + peek()->lexeme + "'";
    result_.errors.push_back(Diagnostic{DiagnosticKind::ParseError, Severity::Error, error_span(missing_closer),
                                        "expected " + expected + ", found " + found});
    throw ParseFailure{};
  }

  [[noreturn]] void fail_at(const SourceSpan& span, std::string message) {
    result_.errors.push_back(Diagnostic{DiagnosticKind::ParseError, Severity::Error, span, std::move(message)});
    throw ParseFailure{};
  }

  const Token& expect_punct(std::string_view p, const std::string& context) {
    if (!check_punct(p)) fail("'" + std::string(p) + "' " + context, p == ";" || p == "}" || p == ")");
    return take();
  }

  const Token& expect_identifier(const std::string& what) {
    if (!check_kind(TokenKind::Identifier)) fail(what);
    return take();
  }

  std::int64_t expect_int(const std::string& what) {
    if (!check_kind(TokenKind::IntegerLiteral)) fail(what);
    const Token& t = take();
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
    if (ec != std::errc() || ptr != t.lexeme.data() + t.lexeme.size()) {
      fail_at(t.span, "integer '" + t.lexeme + "' out of range");
    }
    return v;
  }

  ast::Decl declaration() {
    const Token& name = expect_identifier("declaration name");
    expect_punct(":", "after declaration name");
    if (peek() && peek()->is_keyword("signal")) return signal_decl(name);
    if (peek() && peek()->is_keyword("constant")) return constant_decl(name);
    if (peek() && peek()->is_keyword("invariant")) return invariant_decl(name);
    fail("'signal', 'constant' or 'invariant'");
  }

  ast::SignalDecl signal_decl(const Token& name) {
    ast::SignalDecl s;
    s.name = name.lexeme;
    take();  // signal
    if (check_punct("(")) {
      const Token& open = take();
      ast::IndexRange r;
      r.variable = expect_identifier("index variable").lexeme;
      expect_punct(":", "after index variable");
      r.lo = expect_int("lower index bound");
      if (!(peek() && peek()->is(TokenKind::Identifier, "to"))) fail("'to'");
      take();
      r.hi = expect_int("upper index bound");
      const Token& close = expect_punct(")", "to close the index range");
      r.span = merge(open.span, close.span);
      s.index_range = r;
    }
    expect_punct("=", "after 'signal'");
    expect_punct("{", "to open the signal body");
    bool have_derivation = false;
    while (!check_punct("}")) {
      if (is_decl_header(pos_)) fail("'}' to close the signal body", true);
      if (!check_kind(TokenKind::Identifier)) fail("'name', 'symbol', 'derivation' or '}'");
      const Token& field = take();
      auto duplicate = [&] { fail_at(field.span, "duplicate '" + field.lexeme + "' field"); };
      if (field.lexeme == "name") {
        if (s.name_field) duplicate();
        expect_punct("=", "after 'name'");
        if (!check_kind(TokenKind::StringLiteral)) fail("string literal");
        const Token& str = take();
        ast::NameField nf;
        nf.text = unquote(str.lexeme);
        nf.span = str.span;
        if (check_kind(TokenKind::Identifier)) {
          const Token& lang = take();
          nf.language = lang.lexeme;
          nf.span = merge(str.span, lang.span);
        }
        s.name_field = nf;
      } else if (field.lexeme == "symbol") {
        if (s.symbol) duplicate();
        expect_punct("=", "after 'symbol'");
        const Token& sym = expect_identifier("unit symbol");
        s.symbol = sym.lexeme;
        s.symbol_span = sym.span;
      } else if (field.lexeme == "derivation") {
        if (have_derivation) duplicate();
        expect_punct("=", "after 'derivation'");
        have_derivation = true;
        if (peek() && peek()->is_keyword("none")) {
          take();
        } else {
          s.derivation = expression();
        }
      } else {
        fail_at(field.span, "unknown signal field '" + field.lexeme + "'; expected 'name', 'symbol' or 'derivation'");
      }
      expect_punct(";", "after signal field");
    }
    const Token& close = take();
    if (!have_derivation) {
      fail_at(close.span, "signal '" + s.name + "' has no derivation field");
    }
    s.span = merge(name.span, close.span);
    return s;
  }

  ast::ConstantDecl constant_decl(const Token& name) {
    ast::ConstantDecl c;
    c.name = name.lexeme;
    take();  // constant
    expect_punct("=", "after 'constant'");
    c.value = expression();
    const Token& semi = expect_punct(";", "after constant value");
    c.span = merge(name.span, semi.span);
    return c;
  }

  ast::InvariantDecl invariant_decl(const Token& name) {
    ast::InvariantDecl inv;
    inv.name = name.lexeme;
    take();  // invariant
    expect_punct("(", "to open the parameter list");
    if (!check_punct(")")) {
      while (true) {
        const Token& p = expect_identifier("parameter name");
        expect_punct(":", "after parameter name");
        const Token& type = expect_identifier("signal type name");
        inv.params.push_back(ast::Param{p.lexeme, type.lexeme, merge(p.span, type.span)});
        if (!check_punct(",")) break;
        take();
      }
    }
    expect_punct(")", "to close the parameter list");
    expect_punct("=", "after invariant parameters");
    expect_punct("{", "to open the invariant body");
    if (check_punct("}")) fail("at least one relation");
    while (true) {
      inv.body.push_back(relation());
      if (!check_punct(",")) break;
      take();
    }
    const Token& close = expect_punct("}", "to close the invariant body");
    inv.span = merge(name.span, close.span);
    return inv;
  }

  ast::Relation relation() {
    ast::Relation r;
    r.lhs = expression();
    if (!check_kind(TokenKind::Operator) || !ast::parse_relop(peek()->lexeme)) {
      fail("relational operator ('~', '<', '<=', '>', '>=', '==')");
    }
    r.op = *ast::parse_relop(take().lexeme);
    r.rhs = expression();
    r.span = merge(r.lhs.span, r.rhs.span);
    return r;
  }

  Expr expression() { return additive(); }

  Expr additive() {
    Expr lhs = multiplicative();
    while (check_op("+") || check_op("-")) {
      const BinaryOp op = take().lexeme == "+" ? BinaryOp::Add : BinaryOp::Sub;
      Expr rhs = multiplicative();
      SourceSpan span = merge(lhs.span, rhs.span);
      lhs = Expr::binary(op, std::move(lhs), std::move(rhs), std::move(span));
    }
    return lhs;
  }

  Expr multiplicative() {
    Expr lhs = unary();
    while (check_op("*") || check_op("/")) {
      const BinaryOp op = take().lexeme == "*" ? BinaryOp::Mul : BinaryOp::Div;
      Expr rhs = unary();
      SourceSpan span = merge(lhs.span, rhs.span);
      lhs = Expr::binary(op, std::move(lhs), std::move(rhs), std::move(span));
    }
    return lhs;
  }

  Expr unary() {
    if (check_op("-")) {
      const Token& minus = take();
      Expr operand = unary();
      SourceSpan span = merge(minus.span, operand.span);
      return Expr::negate(std::move(operand), std::move(span));
    }
    return power();
  }

  Expr power() {
    Expr base = postfix();
    if (check_op("**")) {
      take();
      Expr exponent = unary();  // right-associative; admits s**-2
      SourceSpan span = merge(base.span, exponent.span);
      return Expr::binary(BinaryOp::Pow, std::move(base), std::move(exponent), std::move(span));
    }
    return base;
  }

  Expr postfix() {
    Expr base = primary();
    if (check_op("@")) {
      take();
      if (base.kind != ExprKind::Identifier) fail_at(base.span, "only a signal name can be indexed with '@'");
      if (!check_kind(TokenKind::Identifier) && !check_kind(TokenKind::IntegerLiteral)) {
        fail("index variable or integer index after '@'");
      }
      const Token& idx = take();
      Expr index = idx.kind == TokenKind::Identifier ? Expr::identifier(idx.lexeme, idx.span)
                                                     : Expr::number(idx.lexeme, true, idx.span);
      SourceSpan span = merge(base.span, idx.span);
      return Expr::index(std::move(base), std::move(index), std::move(span));
    }
    return base;
  }

  Expr primary() {
    if (check_kind(TokenKind::IntegerLiteral) || check_kind(TokenKind::RealLiteral)) {
      const Token& t = take();
      return Expr::number(t.lexeme, t.kind == TokenKind::IntegerLiteral, t.span);
    }
    if (check_kind(TokenKind::Identifier)) {
      const Token& t = take();
      return Expr::identifier(t.lexeme, t.span);
    }
    if (check_punct("(")) {
      const Token& open = take();
      Expr inner = expression();
      const Token& close = expect_punct(")", "to close parenthesized expression");
      inner.span = merge(open.span, close.span);
      return inner;
    }
    fail("expression");
  }

  static std::string unquote(const std::string& lexeme) {
    std::string out;
    for (std::size_t i = 1; i + 1 < lexeme.size(); ++i) {
      if (lexeme[i] == '\\' && i + 2 < lexeme.size()) ++i;
      out += lexeme[i];
    }
    return out;
  }

  std::span<const Token> toks_;
  std::size_t pos_ = 0;
  ParseResult result_;
};

}  // namespace

ParseResult parse(std::span<const Token> tokens) { return Parser(tokens).run(); }

ParseResult parse_source(std::string_view source, std::string_view file_name) {
  LexResult lexed = tokenize(source, file_name);
  if (!lexed.ok()) return ParseResult{{}, std::move(lexed.errors)};
  return parse(lexed.tokens);
}

}  // namespace newton
