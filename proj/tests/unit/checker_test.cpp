#include <gtest/gtest.h>

#include "cexplore/checker.hpp"
#include "cexplore/eval.hpp"
#include "cexplore/formula_parser.hpp"
#include "generators.hpp"

using namespace cexplore;
using cexplore::testing::toggle;

namespace {

BoundFormula bound(const TypedLks& m, const char* text) { return bind(parse_formula(text), m); }

Lasso toggle_lasso() { return Lasso{{StateId(0), StateId(1)}, {EventId(0), EventId(2)}, 1}; }

}  // namespace

TEST(Checker, ToggleGloballyNotP) {
  TypedLks t = toggle();
  CheckResult r = find_counterexample(t, bound(t, "G !p"), 4);
  ASSERT_FALSE(r.valid());
  EXPECT_EQ(*r.counterexample, toggle_lasso());
  EXPECT_EQ(r.bound, 4u);
}

TEST(Checker, ToggleFinallyPIsValid) {
  TypedLks t = toggle();
  CheckResult r = find_counterexample(t, bound(t, "F p"), 6);
  EXPECT_TRUE(r.valid());
  EXPECT_EQ(r.bound, 6u);
}

TEST(Checker, TrueIsValid) {
  TypedLks t = toggle();
  EXPECT_TRUE(find_counterexample(t, bound(t, "true"), 5).valid());
}

TEST(Checker, RejectsBadInput) {
  TypedLks t = toggle();
  EXPECT_THROW(find_counterexample(t, bound(t, "p"), 0), std::invalid_argument);
  LksBuilder b;
  b.add_type("T");
  StateId s = b.add_state("s", {});
  b.add_initial(s);
  TypedLks broken = std::move(b).build();
  EXPECT_THROW(find_counterexample(broken, BoundFormula::top(), 3), std::invalid_argument);
}

TEST(Oracle, ToggleAgreesWithChecker) {
  TypedLks t = toggle();
  CheckResult r = oracle_find(t, bound(t, "G !p"), 4);
  ASSERT_FALSE(r.valid());
  EXPECT_EQ(*r.counterexample, toggle_lasso());
  EXPECT_TRUE(oracle_find(t, bound(t, "F p"), 6).valid());
}

TEST(Oracle, FalseIsRefutedByFirstLasso) {
  TypedLks t = toggle();
  Lasso first;
  for_each_lasso(t, 2, [&](const Lasso& pi) {
    first = pi;
    return false;
  });
  // Shortest lassos have two positions: s0 -> s1, closed back to s1 or s0.
  EXPECT_EQ(first, toggle_lasso());
  CheckResult r = oracle_find(t, bound(t, "false"), 2);
  ASSERT_FALSE(r.valid());
  EXPECT_EQ(*r.counterexample, first);
}

TEST(Oracle, SingleSelfLoop) {
  LksBuilder b;
  TypeId t = b.add_type("T");
  EventId e = b.add_event("e", {}, t);
  StateId s = b.add_state("s", {});
  b.add_initial(s);
  b.add_transition(s, s, {e});
  TypedLks m = std::move(b).build();
  for (std::size_t k = 1; k <= 5; ++k) {
    EXPECT_TRUE(oracle_find(m, bound(m, "G @e[]"), k).valid());
    EXPECT_TRUE(find_counterexample(m, bound(m, "G @e[]"), k).valid());
  }
}

TEST(Oracle, ResourceCap) {
  TypedLks t = toggle();
  EXPECT_THROW(oracle_find(t, bound(t, "true"), 8, 10), ResourceCapExceeded);
}

TEST(Oracle, EnumerationOrder) {
  TypedLks t = toggle();
  std::vector<Lasso> seen;
  for_each_lasso(t, 3, [&](const Lasso& pi) {
    seen.push_back(pi);
    return true;
  });
  // Length 2: close at s1 (stay) before s0 (unset).
  ASSERT_GE(seen.size(), 4u);
  EXPECT_EQ(seen[0], toggle_lasso());
  EXPECT_EQ(seen[1], (Lasso{{StateId(0), StateId(1)}, {EventId(0), EventId(3)}, 0}));
  EXPECT_EQ(seen[2], (Lasso{{StateId(0), StateId(1)}, {EventId(1), EventId(2)}, 1}));
  for (const Lasso& pi : seen) EXPECT_TRUE(is_path_of(t, pi));
}

TEST(CheckerProperty, AgreesWithOracleOnRandomModels) {
  std::mt19937 rng(41);
  for (int round = 0; round < 200; ++round) {
    TypedLks m = cexplore::testing::random_model(rng);
    BoundFormula f = bind(cexplore::testing::random_formula(rng, m, 4), m);
    std::size_t k = 1 + rng() % 6;
    CheckResult fast = find_counterexample(m, f, k);
    CheckResult slow = oracle_find(m, f, k);
    ASSERT_EQ(fast.counterexample, slow.counterexample) << to_string(f.formula()) << " bound " << k;
    if (fast.counterexample) {
      EXPECT_TRUE(is_path_of(m, *fast.counterexample));
      EXPECT_FALSE(eval_lasso(m, f, *fast.counterexample));
      EXPECT_LE(fast.counterexample->size(), k);
    }
  }
}

TEST(CheckerProperty, DeterministicAndMonotone) {
  std::mt19937 rng(43);
  for (int round = 0; round < 100; ++round) {
    TypedLks m = cexplore::testing::random_model(rng);
    BoundFormula f = bind(cexplore::testing::random_formula(rng, m, 4), m);
    CheckResult a = find_counterexample(m, f, 4);
    CheckResult b = find_counterexample(m, f, 4);
    EXPECT_EQ(a.counterexample, b.counterexample);
    if (!a.valid()) {
      for (std::size_t k = 5; k <= 7; ++k) EXPECT_FALSE(find_counterexample(m, f, k).valid());
    }
  }
}
