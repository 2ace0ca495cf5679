#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cexplore {

struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, SourceLocation where);

  const SourceLocation& location() const { return where_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  SourceLocation where_;
};

enum class TokenKind { Ident, Symbol, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourceLocation where;

  bool is(std::string_view symbol) const { return kind == TokenKind::Symbol && text == symbol; }
  bool is_word(std::string_view word) const { return kind == TokenKind::Ident && text == word; }
};

// Splits text into identifiers ([A-Za-z0-9_]+) and punctuation. Recognised
// multi-character symbols: && || -> := <= >= != .  Line comments start with
// "//" or "#". Unknown characters raise ParseError.
std::vector<Token> tokenize(std::string_view text);

// Cursor over a token vector with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokenKind::End; }

  bool accept(std::string_view symbol);
  bool accept_word(std::string_view word);
  const Token& expect(std::string_view symbol);
  void expect_word(std::string_view word);
  const Token& expect_ident(std::string_view what = "identifier");

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& tok, const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace cexplore
