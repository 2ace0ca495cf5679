#include <gtest/gtest.h>

#include "cexplore/formula.hpp"
#include "cexplore/formula_parser.hpp"
#include "generators.hpp"

using namespace cexplore;
using cexplore::testing::toggle;

namespace {

Formula p() { return Formula::prop("p"); }
Formula q() { return Formula::prop("q"); }
Formula r() { return Formula::prop("r"); }

}  // namespace

TEST(Parser, GloballyNot) { EXPECT_EQ(parse_formula("G !p"), globally(!p())); }

TEST(Parser, UntilWithTypeAndNext) {
  EXPECT_EQ(parse_formula("p U (@In & X q)"), until(p(), Formula::type("In") && next(q())));
  EXPECT_EQ(parse_formula("p U (@In && X q)"), until(p(), Formula::type("In") && next(q())));
}

TEST(Parser, UntilIsRightAssociative) { EXPECT_EQ(parse_formula("p U q U r"), until(p(), until(q(), r()))); }

TEST(Parser, Precedence) {
  EXPECT_EQ(parse_formula("!p U q && r"), until(!p(), q()) && r());
  EXPECT_EQ(parse_formula("p && q || r"), core_or(p() && q(), r()));
  EXPECT_EQ(parse_formula("p -> q -> r"), core_implies(p(), core_implies(q(), r())));
  EXPECT_EQ(parse_formula("X G F p"), next(globally(finally(p()))));
}

TEST(Parser, DerivedFormsUseCoreSyntax) {
  EXPECT_EQ(parse_formula("false"), !Formula::top());
  EXPECT_EQ(parse_formula("p || q"), !(!p() && !q()));
  EXPECT_EQ(parse_formula("p -> q"), !(p() && !q()));
}

TEST(Parser, EventAndIndexedAtoms) {
  EXPECT_EQ(parse_formula("@In[g0,r0,k1]"), Formula::event("In[g0,r0,k1]"));
  EXPECT_EQ(parse_formula("@stay[]"), Formula::event("stay[]"));
  EXPECT_EQ(parse_formula("occupant[r0][g1]"), Formula::prop("occupant[r0][g1]"));
  EXPECT_EQ(parse_formula("current[r0]=k1"), Formula::prop("current[r0]=k1"));
}

TEST(Parser, SyntaxErrorsCarryLocation) {
  try {
    parse_formula("p &&\n  (q U");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location().line, 2u);
  }
  try {
    parse_formula("p ; q");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location().column, 3u);
  }
  EXPECT_THROW(parse_formula("p % q"), ParseError);
  EXPECT_THROW(parse_formula(""), ParseError);
  EXPECT_THROW(parse_formula("G"), ParseError);
}

TEST(Printer, FullyParenthesised) {
  EXPECT_EQ(to_string(parse_formula("p U (@In & X q)")), "(p U (@In && X q))");
  EXPECT_EQ(to_string(parse_formula("G !p")), "G !p");
}

TEST(Nnf, Dualities) {
  EXPECT_EQ(nnf(!next(p())), next(!p()));
  EXPECT_EQ(nnf(!globally(p())), finally(!p()));
  EXPECT_EQ(nnf(!finally(p())), globally(!p()));
  EXPECT_EQ(nnf(!!p()), p());
  EXPECT_EQ(nnf(!until(p(), q())), release(!p(), !q()));
  EXPECT_EQ(nnf(!(p() && q())), !p() || !q());
}

TEST(Bind, ResolvesToggleAtoms) {
  TypedLks t = toggle();
  EXPECT_NO_THROW(bind(p(), t));
  EXPECT_NO_THROW(bind(Formula::type("Set"), t));
  EXPECT_NO_THROW(bind(Formula::event("setA[]"), t));
  BoundFormula b = bind(p() && Formula::type("Unset"), t);
  EXPECT_EQ(b.formula().lhs().atom().id, 0);
  EXPECT_EQ(b.formula().rhs().atom().id, 2);
}

TEST(Bind, ListsAllUnknownAtoms) {
  TypedLks t = toggle();
  try {
    bind(q() && until(Formula::type("Nope"), Formula::event("zap[]")), t);
    FAIL() << "expected UnknownAtom";
  } catch (const UnknownAtom& e) {
    EXPECT_EQ(e.names, (std::vector<std::string>{"q", "@Nope", "@zap[]"}));
  }
}

TEST(FormulaProperty, PrintParseRoundTrip) {
  std::mt19937 rng(11);
  for (int round = 0; round < 300; ++round) {
    TypedLks m = cexplore::testing::random_model(rng);
    Formula f = cexplore::testing::random_formula(rng, m, 5);
    EXPECT_EQ(parse_formula(to_string(f)), f) << to_string(f);
  }
}
