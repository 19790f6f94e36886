#include "newton/lexer.hpp"

#include <array>
#include <cctype>

namespace newton {

const char* to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::IntegerLiteral: return "integer literal";
    case TokenKind::RealLiteral: return "real literal";
    case TokenKind::StringLiteral: return "string literal";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punctuation: return "punctuation";
  }
  return "token";
}

namespace {

constexpr std::array<std::string_view, 4> kKeywords = {"signal", "constant", "invariant", "none"};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
 public:
  Lexer(std::string_view src, std::string_view file) : src_(src), file_(file) {}

  LexResult run() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n' || c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (is_ident_start(c)) {
        lex_identifier();
      } else if (is_digit(c)) {
        lex_number();
      } else if (c == '"') {
        lex_string();
      } else {
        lex_symbol();
      }
    }
    return std::move(result_);
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
      ++col_;  // count code points, not continuation bytes
    }
    ++pos_;
  }

  void begin() {
    start_ = pos_;
    start_line_ = line_;
    start_col_ = col_;
  }

  SourceSpan span() const { return SourceSpan{std::string(file_), start_line_, start_col_, line_, col_}; }

  void emit(TokenKind kind) {
    result_.tokens.push_back(Token{kind, std::string(src_.substr(start_, pos_ - start_)), span(), start_});
  }

  void error(std::string message) {
    result_.errors.push_back(Diagnostic{DiagnosticKind::LexError, Severity::Error, span(), std::move(message)});
  }

  void lex_identifier() {
    begin();
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
    const auto text = src_.substr(start_, pos_ - start_);
    bool keyword = false;
    for (auto kw : kKeywords) keyword = keyword || kw == text;
    emit(keyword ? TokenKind::Keyword : TokenKind::Identifier);
  }

  void lex_number() {
    begin();
    bool real = false;
    while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' && is_digit(src_[pos_ + 1])) {
      real = true;
      advance();
      while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && is_digit(src_[look])) {
        real = true;
        while (pos_ < look) advance();
        while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
      }
    }
    emit(real ? TokenKind::RealLiteral : TokenKind::IntegerLiteral);
  }

  void lex_string() {
    begin();
    advance();  // opening quote
    while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size() && src_[pos_ + 1] != '\n') advance();
      advance();
    }
    if (pos_ >= src_.size() || src_[pos_] != '"') {
      error("unterminated string literal");
      return;
    }
    advance();
    emit(TokenKind::StringLiteral);
  }

  void lex_symbol() {
    begin();
    const char c = src_[pos_];
    const char next = pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0';
    auto two = [&](TokenKind kind) {
      advance();
      advance();
      emit(kind);
    };
    auto one = [&](TokenKind kind) {
      advance();
      emit(kind);
    };
    switch (c) {
      case '*':
        if (next == '*') return two(TokenKind::Operator);
        return one(TokenKind::Operator);
      case '<':
      case '>':
        if (next == '=') return two(TokenKind::Operator);
        return one(TokenKind::Operator);
      case '=':
        if (next == '=') return two(TokenKind::Operator);
        return one(TokenKind::Punctuation);
      case '/':
      case '+':
      case '-':
      case '~':
      case '@':
        return one(TokenKind::Operator);
      case ':':
      case ';':
      case ',':
      case '(':
      case ')':
      case '{':
      case '}':
        return one(TokenKind::Punctuation);
      default:
        break;
    }
    // Consume one whole UTF-8 code point so multi-byte characters give a
    // single diagnostic.
    advance();
    while (pos_ < src_.size() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) advance();
    error("illegal character '" + std::string(src_.substr(start_, pos_ - start_)) + "'");
  }

  std::string_view src_;
  std::string_view file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::size_t start_ = 0;
  int start_line_ = 1;
  int start_col_ = 1;
  LexResult result_;
};

}  // namespace

LexResult tokenize(std::string_view source, std::string_view file_name) {
  return Lexer(source, file_name).run();
}

}  // namespace newton
