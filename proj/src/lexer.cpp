#include "cexplore/lexer.hpp"

#include <array>
#include <cctype>

namespace cexplore {

ParseError::ParseError(const std::string& message, SourceLocation where)
    : std::runtime_error(std::to_string(where.line) + ":" + std::to_string(where.column) + ": " + message),
      message_(message),
      where_(where) {}

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

constexpr std::array<std::string_view, 7> kMultiSymbols = {"&&", "||", "->", ":=", "<=", ">=", "!="};
constexpr std::string_view kSingleSymbols = "()[]{},:;|@!=<>'&";

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  SourceLocation at;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++at.line;
        at.column = 1;
      } else {
        ++at.column;
      }
    }
  };

  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < text.size() && text[i + 1] == '/')) {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      out.push_back({TokenKind::Ident, std::string(text.substr(i, j - i)), at});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (auto sym : kMultiSymbols) {
      if (text.substr(i, sym.size()) == sym) {
        out.push_back({TokenKind::Symbol, std::string(sym), at});
        advance(sym.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (kSingleSymbols.find(c) != std::string_view::npos) {
      out.push_back({TokenKind::Symbol, std::string(1, c), at});
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", at);
  }
  out.push_back({TokenKind::End, "", at});
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t k = pos_ + ahead;
  return k < tokens_.size() ? tokens_[k] : tokens_.back();
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool TokenStream::accept(std::string_view symbol) {
  if (!peek().is(symbol)) return false;
  next();
  return true;
}

bool TokenStream::accept_word(std::string_view word) {
  if (!peek().is_word(word)) return false;
  next();
  return true;
}

const Token& TokenStream::expect(std::string_view symbol) {
  if (!peek().is(symbol)) fail("expected '" + std::string(symbol) + "'");
  return next();
}

void TokenStream::expect_word(std::string_view word) {
  if (!peek().is_word(word)) fail("expected '" + std::string(word) + "'");
  next();
}

const Token& TokenStream::expect_ident(std::string_view what) {
  if (peek().kind != TokenKind::Ident) fail("expected " + std::string(what));
  return next();
}

void TokenStream::fail(const std::string& message) const { fail_at(peek(), message); }

void TokenStream::fail_at(const Token& tok, const std::string& message) const {
  std::string found = tok.kind == TokenKind::End ? "end of input" : "'" + tok.text + "'";
  throw ParseError(message + ", found " + found, tok.where);
}

}  // namespace cexplore
