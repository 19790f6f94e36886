#include <gtest/gtest.h>

#include <cstdlib>
#include <string>
#include <variant>
#include <vector>

#include "newton/ast.hpp"
#include "newton/lexer.hpp"
#include "newton/parser.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

namespace newton {
namespace {

using ast::BinaryOp;
using ast::Expr;
using ast::ExprKind;

ast::Expr parse_expr(const std::string& text) {
  auto r = parse_source("x : constant = " + text + ";", "t");
  EXPECT_TRUE(r.ok()) << (r.errors.empty() ? "" : format(r.errors[0]));
  if (r.decls.empty()) return {};
  return std::get<ast::ConstantDecl>(r.decls[0]).value;
}

TEST(Parser, Pendulum) {
  const auto r = parse_source(testing::read_fixture("pendulum.newton"), "pendulum.newton");
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.decls.size(), 6u);
  std::vector<std::string> names;
  for (const auto& d : r.decls) names.push_back(ast::decl_name(d));
  EXPECT_EQ(names, (std::vector<std::string>{"time", "length", "mass", "Pi", "g", "pendulum"}));
  const auto& inv = std::get<ast::InvariantDecl>(r.decls[5]);
  ASSERT_EQ(inv.params.size(), 2u);
  EXPECT_EQ(inv.params[0].name, "L");
  EXPECT_EQ(inv.params[0].type_name, "length");
  ASSERT_EQ(inv.body.size(), 1u);
  EXPECT_EQ(inv.body[0].op, ast::RelOp::Proportional);
  EXPECT_EQ(ast::print(inv.body[0].lhs), "period");
  EXPECT_EQ(ast::print(inv.body[0].rhs), "2*Pi*(L/g)**(1/2)");
  const auto& mass = std::get<ast::SignalDecl>(r.decls[2]);
  EXPECT_EQ(mass.symbol, "kg");
  EXPECT_EQ(mass.name_field->text, "kilogram");
  EXPECT_EQ(mass.name_field->language, "English");
  EXPECT_FALSE(mass.derivation.has_value());
}

TEST(Parser, IndexedDerivation) {
  const auto r = parse_source(testing::read_fixture("distance_speed.newton"), "d.newton");
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.decls.size(), 3u);
  const auto& speed = std::get<ast::SignalDecl>(r.decls[2]);
  ASSERT_TRUE(speed.index_range.has_value());
  EXPECT_EQ(speed.index_range->variable, "i");
  EXPECT_EQ(speed.index_range->lo, 0);
  EXPECT_EQ(speed.index_range->hi, 2);
  ASSERT_TRUE(speed.derivation.has_value());
  const Expr& d = *speed.derivation;
  ASSERT_EQ(d.kind, ExprKind::Binary);
  EXPECT_EQ(d.op, BinaryOp::Div);
  EXPECT_EQ(d.children[0].kind, ExprKind::Index);
  EXPECT_EQ(d.children[0].children[0].text, "distance");
  EXPECT_EQ(d.children[0].children[1].text, "i");
  EXPECT_EQ(d.children[1].text, "time");
  EXPECT_FALSE(speed.name_field.has_value());
  EXPECT_FALSE(speed.symbol.has_value());
}

TEST(Parser, MinimalSignal) {
  const auto r = parse_source("x : signal = { derivation = none; }", "t");
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.decls.size(), 1u);
  const auto& s = std::get<ast::SignalDecl>(r.decls[0]);
  EXPECT_EQ(s.name, "x");
  EXPECT_FALSE(s.derivation.has_value());
}

TEST(Parser, EmptyInput) {
  const auto r = parse_source("  # nothing\n", "t");
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.decls.empty());
}

TEST(Parser, Precedence) {
  EXPECT_EQ(ast::print(parse_expr("a + b * c")), "a + b*c");
  EXPECT_EQ(ast::print(parse_expr("(a + b) * c")), "(a + b)*c");
  const Expr p = parse_expr("a ** b ** c");
  EXPECT_EQ(p.op, BinaryOp::Pow);
  EXPECT_EQ(p.children[1].op, BinaryOp::Pow);
  const Expr n = parse_expr("-a ** 2");
  EXPECT_EQ(n.kind, ExprKind::Negate);
  const Expr s = parse_expr("s**-2");
  EXPECT_EQ(s.op, BinaryOp::Pow);
  EXPECT_EQ(s.children[1].kind, ExprKind::Negate);
  const Expr d = parse_expr("a / b / c");
  EXPECT_EQ(d.children[0].op, BinaryOp::Div);
  EXPECT_EQ(parse_expr("x@1 ** 2").children[0].kind, ExprKind::Index);
}

TEST(Parser, InvariantWithSeveralRelations) {
  const auto r = parse_source("v : invariant(a: t, b: t) = { a < b, a*2 >= b, a == a }", "t");
  ASSERT_TRUE(r.ok());
  const auto& inv = std::get<ast::InvariantDecl>(r.decls[0]);
  ASSERT_EQ(inv.body.size(), 3u);
  EXPECT_EQ(inv.body[0].op, ast::RelOp::Less);
  EXPECT_EQ(inv.body[1].op, ast::RelOp::GreaterEqual);
  EXPECT_EQ(inv.body[2].op, ast::RelOp::Equal);
}

TEST(Parser, ErrorMessages) {
  {
    const auto r = parse_source("x : signal = { symbol = s; }", "t");
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(r.errors[0].kind, DiagnosticKind::ParseError);
  }
  {
    const auto r = parse_source("x : constant = 3", "t");
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_NE(r.errors[0].message.find("expected ';'"), std::string::npos) << r.errors[0].message;
  }
  {
    const auto r = parse_source("v : invariant(a: t) = { }", "t");
    EXPECT_FALSE(r.ok());
  }
  {
    const auto r = parse_source("x : signal = { derivation = none; derivation = none; }", "t");
    EXPECT_FALSE(r.ok());
  }
  {
    const auto r = parse_source("x : constant = (a + 3)@2;", "t");
    EXPECT_FALSE(r.ok());
  }
}

TEST(Parser, MissingCloserAnchorsAtPreviousToken) {
  const auto r = parse_source("a : signal = { derivation = none;\n\n\nb : constant = 1;", "t");
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].span.line_start, 1);
  EXPECT_NE(r.errors[0].message.find("expected '}'"), std::string::npos) << r.errors[0].message;
  ASSERT_EQ(r.decls.size(), 1u);

  const auto c = parse_source("x : constant = 3\n\n\ny : constant = 4;", "t");
  ASSERT_EQ(c.errors.size(), 1u);
  EXPECT_EQ(c.errors[0].span.line_start, 1);
}

TEST(Parser, RecoversAtNextDeclaration) {
  const auto r = parse_source("a : constant = 3 +;\nb : constant = 4;\nc : constant = ;\nd : constant = 5;", "t");
  EXPECT_EQ(r.errors.size(), 2u);
  ASSERT_EQ(r.decls.size(), 2u);
  EXPECT_EQ(ast::decl_name(r.decls[0]), "b");
  EXPECT_EQ(ast::decl_name(r.decls[1]), "d");
  EXPECT_EQ(r.errors[0].span.line_start, 1);
  EXPECT_EQ(r.errors[1].span.line_start, 3);
}

TEST(Parser, LexErrorsSuppressParsing) {
  const auto r = parse_source("a : constant = $;", "t");
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].kind, DiagnosticKind::LexError);
}

TEST(Parser, PrintParseRoundTripFixtures) {
  for (const char* name : {"pendulum.newton", "distance_speed.newton"}) {
    const auto first = parse_source(testing::read_fixture(name), name);
    ASSERT_TRUE(first.ok());
    const std::string printed = ast::print(first.decls);
    const auto second = parse_source(printed, "printed");
    ASSERT_TRUE(second.ok()) << printed;
    EXPECT_TRUE(ast::equivalent(first.decls, second.decls)) << printed;
    EXPECT_EQ(ast::print(second.decls), printed);
  }
}

TEST(ParserProperty, PrintParseRoundTripRandom) {
  testing::Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    std::vector<ast::Decl> decls;
    const int n = testing::uniform(rng, 0, 4);
    for (int k = 0; k < n; ++k) decls.push_back(testing::random_decl(rng));
    const std::string printed = ast::print(decls);
    const auto r = parse_source(printed, "printed");
    ASSERT_TRUE(r.ok()) << printed << "\n" << format(r.errors[0]);
    ASSERT_TRUE(ast::equivalent(decls, r.decls)) << printed;
  }
}

// Deleting any single token must either still parse or report its first
// error within one line of where the token was.
TEST(ParserProperty, SingleTokenDeletionErrorLines) {
  for (const char* name : {"pendulum.newton", "distance_speed.newton"}) {
    const auto lexed = tokenize(testing::read_fixture(name), name);
    ASSERT_TRUE(lexed.ok());
    for (std::size_t skip = 0; skip < lexed.tokens.size(); ++skip) {
      std::vector<Token> tokens;
      for (std::size_t i = 0; i < lexed.tokens.size(); ++i) {
        if (i != skip) tokens.push_back(lexed.tokens[i]);
      }
      const auto r = parse(tokens);
      const int line = lexed.tokens[skip].span.line_start;
      if (r.errors.empty()) continue;
      const auto& e = r.errors.front();
      EXPECT_LE(std::abs(e.span.line_start - line), 1)
          << name << ": deleting '" << lexed.tokens[skip].lexeme << "' at line " << line << " -> " << format(e);
    }
  }
}

}  // namespace
}  // namespace newton
