#include <gtest/gtest.h>

#include "cexplore/encode.hpp"
#include "cexplore/eval.hpp"
#include "generators.hpp"

using namespace cexplore;
using cexplore::testing::toggle;

namespace {

Lasso toggle_lasso() { return Lasso{{StateId(0), StateId(1)}, {EventId(0), EventId(2)}, 1}; }

}  // namespace

TEST(Encode, ToggleStates) {
  TypedLks t = toggle();
  EXPECT_EQ(encode_state(t, StateId(0)).formula(), !Formula::prop("p", 0));
  EXPECT_EQ(encode_state(t, StateId(1)).formula(), Formula::prop("p", 0));
}

TEST(Encode, StateOverTwoProps) {
  LksBuilder b;
  b.add_prop("p");
  PropId q = b.add_prop("q");
  TypeId t = b.add_type("T");
  EventId e = b.add_event("e", {}, t);
  StateId s = b.add_state("s", {q});
  b.add_initial(s);
  b.add_transition(s, s, {e});
  TypedLks m = std::move(b).build();
  EXPECT_EQ(to_string(encode_state(m, s)), "(!p && q)");
}

TEST(Encode, NestNext) {
  TypedLks t = toggle();
  BoundFormula p = encode_state(t, StateId(1));
  EXPECT_EQ(nest_next(p, 0).formula(), p.formula());
  EXPECT_EQ(to_string(nest_next(p, 2)), "X X p");
  EXPECT_EQ(to_string(nest_next(bind(globally(Formula::prop("p")), t), 1)), "X G p");
}

TEST(Encode, TogglePrefix) {
  TypedLks t = toggle();
  Lasso pi = toggle_lasso();
  EXPECT_EQ(encode_prefix(t, pi, 0).formula(), Formula::top());
  Formula p = Formula::prop("p", 0);
  Formula step0 = !p && Formula::event("setA[]", 0);
  Formula step1 = p && Formula::event("stay[]", 2);
  EXPECT_EQ(encode_prefix(t, pi, 1).formula(), step0);
  EXPECT_EQ(encode_prefix(t, pi, 2).formula(), step0 && next(step1));
  EXPECT_EQ(to_string(encode_prefix(t, pi, 2)), "((!p && @setA[]) && X (p && @stay[]))");
}

TEST(EncodeProperty, PrefixHoldsOnItsOwnLasso) {
  std::mt19937 rng(21);
  for (int round = 0; round < 200; ++round) {
    TypedLks m = cexplore::testing::random_model(rng);
    Lasso pi = cexplore::testing::random_lasso(rng, m, 6);
    for (std::size_t i = 0; i <= pi.size(); ++i) EXPECT_TRUE(eval_lasso(m, encode_prefix(m, pi, i), pi));
  }
}

TEST(EncodeProperty, PrefixExactlyCharacterises) {
  std::mt19937 rng(22);
  for (int round = 0; round < 300; ++round) {
    TypedLks m = cexplore::testing::random_model(rng);
    Lasso pi = cexplore::testing::random_lasso(rng, m, 5);
    Lasso other = cexplore::testing::random_lasso(rng, m, 5);
    std::size_t i = rng() % (pi.size() + 2);
    bool agree = true;
    for (std::size_t j = 0; j < i; ++j) {
      Step a = unroll(pi, j), b = unroll(other, j);
      // Equal valuations count as equal states for [s].
      auto la = m.label(a.state), lb = m.label(b.state);
      if (!std::equal(la.begin(), la.end(), lb.begin(), lb.end()) || a.event != b.event) agree = false;
    }
    EXPECT_EQ(eval_lasso(m, encode_prefix(m, pi, i), other), agree);
  }
}
