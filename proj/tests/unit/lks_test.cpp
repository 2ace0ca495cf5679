#include <gtest/gtest.h>

#include "cexplore/lks.hpp"
#include "generators.hpp"

using namespace cexplore;
using cexplore::testing::toggle;

namespace {

Lasso toggle_lasso() { return Lasso{{StateId(0), StateId(1)}, {EventId(0), EventId(2)}, 1}; }

}  // namespace

TEST(Lks, ToggleIsWellFormed) {
  TypedLks t = toggle();
  EXPECT_TRUE(validate_lks(t).empty());
  EXPECT_EQ(t.num_states(), 2u);
  EXPECT_EQ(t.num_events(), 4u);
  EXPECT_EQ(t.num_types(), 3u);
  EXPECT_EQ(t.event_name(EventId(0)), "setA[]");
  EXPECT_EQ(t.type_name(t.type_of(EventId(1))), "Set");
}

TEST(Lks, ToggleSuccessors) {
  TypedLks t = toggle();
  auto s0 = t.successors(StateId(0));
  ASSERT_EQ(s0.size(), 1u);
  EXPECT_EQ(s0[0].target, StateId(1));
  EXPECT_EQ(s0[0].events, (std::vector<EventId>{EventId(0), EventId(1)}));

  auto s1 = t.successors(StateId(1));
  ASSERT_EQ(s1.size(), 2u);
  EXPECT_EQ(s1[0].target, StateId(0));
  EXPECT_EQ(s1[0].events, std::vector<EventId>{EventId(3)});
  EXPECT_EQ(s1[1].target, StateId(1));
  EXPECT_EQ(s1[1].events, std::vector<EventId>{EventId(2)});
}

TEST(Lks, SuccessorsOfUnknownStateThrows) {
  TypedLks t = toggle();
  EXPECT_THROW(t.successors(StateId(7)), std::out_of_range);
}

TEST(Lks, DeadlockIsReported) {
  LksBuilder b;
  PropId p = b.add_prop("p");
  TypeId t = b.add_type("T");
  EventId e = b.add_event("e", {}, t);
  StateId s0 = b.add_state("s0", {p});
  StateId s1 = b.add_state("s1", {});
  b.add_initial(s0);
  b.add_transition(s0, s1, {e});
  auto report = validate_lks(std::move(b).build());
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].kind, LksIssue::Kind::Deadlock);
  EXPECT_EQ(report[0].source, s1);
  EXPECT_EQ(to_string(report[0]), "Deadlock(s1)");
}

TEST(Lks, EmptyLabelAndEmptyInitialAreReported) {
  LksBuilder b;
  TypeId t = b.add_type("T");
  b.add_event("e", {}, t);
  StateId s0 = b.add_state("s0", {});
  StateId s1 = b.add_state("s1", {});
  b.add_transition(s0, s1, {});
  b.add_transition(s1, s1, {EventId(0)});
  auto report = validate_lks(std::move(b).build());
  bool empty_label = false, empty_initial = false;
  for (const auto& issue : report) {
    if (issue.kind == LksIssue::Kind::EmptyLabel && issue.source == s0 && issue.target == s1) empty_label = true;
    if (issue.kind == LksIssue::Kind::EmptyInitial) empty_initial = true;
  }
  EXPECT_TRUE(empty_label);
  EXPECT_TRUE(empty_initial);
}

TEST(Lks, DanglingTypeIsReported) {
  LksBuilder b;
  b.add_type("T");
  EventId e = b.add_event("e", {}, TypeId(4));
  StateId s0 = b.add_state("s0", {});
  b.add_initial(s0);
  b.add_transition(s0, s0, {e});
  auto report = validate_lks(std::move(b).build());
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].kind, LksIssue::Kind::DanglingType);
  EXPECT_EQ(to_string(report[0]), "DanglingType(e[])");
}

TEST(Lasso, UnrollReadsPrefixThenLoop) {
  Lasso pi = toggle_lasso();
  EXPECT_EQ(unroll(pi, 0), (Step{StateId(0), EventId(0)}));
  EXPECT_EQ(unroll(pi, 5), (Step{StateId(1), EventId(2)}));
}

TEST(Lasso, UnrollWrapsLongerLoops) {
  // s0 -x-> (s1 -a-> s2 -b->)^w
  Lasso pi{{StateId(0), StateId(1), StateId(2)}, {EventId(9), EventId(1), EventId(2)}, 1};
  EXPECT_EQ(unroll(pi, 4), (Step{StateId(2), EventId(2)}));
  EXPECT_EQ(unroll(pi, 3), (Step{StateId(1), EventId(1)}));
}

TEST(Lasso, PathCheck) {
  TypedLks t = toggle();
  EXPECT_TRUE(is_path_of(t, toggle_lasso()));
  Lasso bad{{StateId(0), StateId(1)}, {EventId(2), EventId(2)}, 1};
  EXPECT_FALSE(is_path_of(t, bad));
  Lasso not_initial{{StateId(1)}, {EventId(2)}, 0};
  EXPECT_FALSE(is_path_of(t, not_initial));
}

TEST(LassoProperty, UnrollFollowsTransitionsAndIsPeriodic) {
  std::mt19937 rng(7);
  for (int round = 0; round < 100; ++round) {
    TypedLks m = cexplore::testing::random_model(rng);
    ASSERT_TRUE(validate_lks(m).empty());
    for (StateId s{0}; s.index() < m.num_states(); s = StateId(s.index() + 1)) {
      EXPECT_FALSE(m.successors(s).empty());
    }
    // Random walk closed into a lasso when it revisits a state.
    Lasso pi;
    pi.states.push_back(m.initial()[0]);
    for (;;) {
      auto edges = m.successors(pi.states.back());
      const Edge& e = edges[rng() % edges.size()];
      pi.events.push_back(e.events[rng() % e.events.size()]);
      auto seen = std::find(pi.states.begin(), pi.states.end(), e.target);
      if (seen != pi.states.end()) {
        pi.loop_start = static_cast<std::size_t>(seen - pi.states.begin());
        break;
      }
      pi.states.push_back(e.target);
    }
    ASSERT_TRUE(is_path_of(m, pi));
    for (std::size_t j = 0; j < 20; ++j) {
      Step here = unroll(pi, j), there = unroll(pi, j + 1);
      const auto* label = m.events_between(here.state, there.state);
      ASSERT_NE(label, nullptr);
      EXPECT_TRUE(std::binary_search(label->begin(), label->end(), here.event));
      if (j >= pi.loop_start) {
        EXPECT_EQ(here, unroll(pi, pi.loop_start + (j - pi.loop_start) % pi.loop_length()));
      }
    }
  }
}
