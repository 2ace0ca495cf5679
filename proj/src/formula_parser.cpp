#include "cexplore/formula_parser.hpp"

namespace cexplore {

namespace {

bool is_keyword(const Token& t) {
  static constexpr std::string_view kWords[] = {"X", "G", "F", "U", "true", "false"};
  if (t.kind != TokenKind::Ident) return false;
  for (auto w : kWords) {
    if (t.text == w) return true;
  }
  return false;
}

class FormulaParser {
 public:
  explicit FormulaParser(TokenStream& ts) : ts_(ts) {}

  Formula implication() {
    Formula lhs = disjunction();
    if (ts_.accept("->")) return core_implies(lhs, implication());
    return lhs;
  }

 private:
  Formula disjunction() {
    Formula lhs = conjunction();
    while (ts_.accept("||") || ts_.accept("|")) lhs = core_or(lhs, conjunction());
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = until_expr();
    while (ts_.accept("&&") || ts_.accept("&")) lhs = lhs && until_expr();
    return lhs;
  }

  Formula until_expr() {
    Formula lhs = unary();
    if (ts_.accept_word("U")) return until(lhs, until_expr());
    return lhs;
  }

  Formula unary() {
    if (ts_.accept("!")) return !unary();
    if (ts_.accept_word("X")) return next(unary());
    if (ts_.accept_word("G")) return globally(unary());
    if (ts_.accept_word("F")) return finally(unary());
    return primary();
  }

  Formula primary() {
    const Token& t = ts_.peek();
    if (ts_.accept("(")) {
      Formula inner = implication();
      ts_.expect(")");
      return inner;
    }
    if (ts_.accept_word("true")) return Formula::top();
    if (ts_.accept_word("false")) return core_false();
    if (ts_.accept("@")) {
      std::string name = ts_.expect_ident("event or type name").text;
      if (!ts_.accept("[")) return Formula::type(name);
      std::string identity = name + "[";
      if (!ts_.peek().is("]")) {
        identity += ts_.expect_ident("event argument").text;
        while (ts_.accept(",")) identity += "," + ts_.expect_ident("event argument").text;
      }
      ts_.expect("]");
      return Formula::event(identity + "]");
    }
    if (t.kind == TokenKind::Ident && !is_keyword(t)) {
      std::string name = ts_.next().text;
      while (ts_.accept("[")) {
        name += "[" + ts_.expect_ident("index").text + "]";
        ts_.expect("]");
      }
      if (ts_.accept("=")) name += "=" + ts_.expect_ident("value").text;
      return Formula::prop(name);
    }
    if (t.kind == TokenKind::End) ts_.fail("unexpected end of formula");
    if (t.kind == TokenKind::Symbol) ts_.fail_at(t, "unknown operator '" + t.text + "'");
    ts_.fail("expected a formula");
  }

  TokenStream& ts_;
};

}  // namespace

Formula parse_formula(TokenStream& tokens) { return FormulaParser(tokens).implication(); }

Formula parse_formula(std::string_view text) {
  TokenStream ts(tokenize(text));
  Formula f = parse_formula(ts);
  if (!ts.at_end()) ts.fail("unexpected trailing input");
  return f;
}

}  // namespace cexplore
