#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cexplore/checker.hpp"
#include "cexplore/egs.hpp"
#include "cexplore/formula_parser.hpp"
#include "generators.hpp"

using namespace cexplore;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(CEXPLORE_MODELS_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelError::Code error_code(std::string_view text, const CompileOptions& opts = {}) {
  try {
    compile_lks(parse_model(text), opts);
  } catch (const ModelError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected ModelError";
  return ModelError::Code::Runtime;
}

const char* kCounter = R"(
model Counter
sort N = {n0, n1, n2} ordered
var c: N
init { c = min(N) }
event inc() modifies c { guard: next(c) != c && c < max(N) effect: c' := next(c) }
)";

}  // namespace

TEST(Egs, ToggleSourceStructure) {
  EventSystem sys = parse_model(slurp("toggle.egs"));
  ASSERT_EQ(sys.vars.size(), 1u);
  EXPECT_TRUE(sys.vars[0].is_bool());
  EXPECT_EQ(sys.schemas.size(), 4u);
  EXPECT_EQ(sys.type_names(), (std::vector<std::string>{"Set", "Stay", "Unset"}));
  EXPECT_EQ(sys.properties.size(), 2u);
}

TEST(Egs, ToggleCompilesToTheHandBuiltModel) {
  TypedLks got = compile_lks(parse_model(slurp("toggle.egs")));
  TypedLks want = cexplore::testing::toggle();
  EXPECT_TRUE(validate_lks(got).empty());
  ASSERT_EQ(got.num_states(), want.num_states());
  ASSERT_EQ(got.num_events(), want.num_events());
  ASSERT_EQ(got.num_types(), want.num_types());
  for (std::uint32_t e = 0; e < want.num_events(); ++e) {
    EXPECT_EQ(got.event_name(EventId(e)), want.event_name(EventId(e)));
    EXPECT_EQ(got.type_name(got.type_of(EventId(e))), want.type_name(want.type_of(EventId(e))));
  }
  EXPECT_EQ(std::vector<StateId>(got.initial().begin(), got.initial().end()), std::vector<StateId>{StateId(0)});
  std::size_t labelled = 0;
  for (std::uint32_t s = 0; s < want.num_states(); ++s) {
    auto a = got.label(StateId(s)), b = want.label(StateId(s));
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    auto ge = got.successors(StateId(s)), we = want.successors(StateId(s));
    ASSERT_EQ(ge.size(), we.size());
    for (std::size_t i = 0; i < ge.size(); ++i) {
      EXPECT_EQ(ge[i].target, we[i].target);
      EXPECT_EQ(ge[i].events, we[i].events);
      labelled += ge[i].events.size();
    }
  }
  EXPECT_EQ(labelled, 4u);
}

TEST(Egs, ToggleProperties) {
  EventSystem sys = parse_model(slurp("toggle.egs"));
  EXPECT_EQ(ground_property(sys, "NeverP"), parse_formula("G !p"));
  EXPECT_THROW(ground_property(sys, "Nope"), ModelError);
}

TEST(Egs, FrameViolation) {
  const char* text = R"(
model M
var a, b: bool
event e() modifies a { guard: true effect: b' := true }
)";
  try {
    parse_model(text);
    FAIL() << "expected FrameViolation";
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), ModelError::Code::FrameViolation);
    ASSERT_TRUE(e.location());
    EXPECT_EQ(e.location()->line, 4u);
  }
}

TEST(Egs, EmptyAndIncompleteModels) {
  EXPECT_THROW(parse_model(""), ModelError);
  EXPECT_THROW(parse_model("// nothing\n"), ModelError);
  EXPECT_THROW(parse_model("model M var a: bool"), ModelError);
  EXPECT_THROW(parse_model("model M event e() { guard: true }"), ModelError);
}

TEST(Egs, TypeErrorsCarryLocations) {
  auto code_at = [](const char* text) -> std::pair<ModelError::Code, std::size_t> {
    try {
      parse_model(text);
    } catch (const ModelError& e) {
      return {e.code(), e.location() ? e.location()->line : 0};
    }
    return {ModelError::Code::Runtime, 0};
  };
  EXPECT_EQ(code_at("model M\nvar a: bool\nevent e() { guard: b }"), std::make_pair(ModelError::Code::Type, std::size_t{3}));
  EXPECT_EQ(code_at("model M\nsort S = {x, y}\nvar v: S\nevent e() { guard: v < y }").first, ModelError::Code::Type);
  EXPECT_EQ(code_at("model M\nsort S = {x, y}\nvar v: S\nevent e() modifies v { effect: v' := true }").first,
            ModelError::Code::Type);
  EXPECT_EQ(code_at("model M\nvar a: bool\nevent e() { guard: @e[] }").first, ModelError::Code::Type);
  EXPECT_EQ(code_at("model M\nvar a: bool\nevent e() { guard: a &&& a }").first, ModelError::Code::Syntax);
  EXPECT_EQ(code_at("model M\nvar a: bool\nevent e() { }\nproperty P { G @Nope }"),
            std::make_pair(ModelError::Code::Type, std::size_t{4}));
}

TEST(Egs, Grounding) {
  const char* text = R"(
model M
sort Guest = {g0, g1}
sort Key = {k0, k1, k2}
var a: bool
event Out(g: Guest) { }
event stay() { }
event In(g: Guest, k: Key) { }
)";
  EventSystem sys = parse_model(text);
  auto events = ground(sys);
  std::vector<std::string> ids;
  for (const auto& g : events) ids.push_back(g.identity);
  EXPECT_EQ(ids, (std::vector<std::string>{"Out[g0]", "Out[g1]", "stay[]", "In[g0,k0]", "In[g0,k1]", "In[g0,k2]",
                                           "In[g1,k0]", "In[g1,k1]", "In[g1,k2]"}));
}

TEST(Egs, OrderedSortFunctions) {
  TypedLks m = compile_lks(parse_model(kCounter), {true});
  // n0 -> n1 -> n2, then idle.
  EXPECT_EQ(m.num_states(), 3u);
  EXPECT_EQ(m.event_name(EventId(1)), "idle[]");
  EXPECT_EQ(m.type_name(m.type_of(EventId(1))), "Idle");
  EXPECT_NE(m.events_between(StateId(2), StateId(2)), nullptr);
  EXPECT_TRUE(validate_lks(m).empty());
  EXPECT_EQ(m.prop_name(PropId(1)), "c=n1");
}

TEST(Egs, DeadlockWithoutIdle) {
  try {
    compile_lks(parse_model(kCounter));
    FAIL() << "expected Deadlock";
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), ModelError::Code::Deadlock);
    EXPECT_EQ(e.states(), std::vector<std::string>{"s2{c=n2}"});
  }
}

TEST(Egs, EmptyInitialAndStateLimit) {
  EXPECT_EQ(error_code("model M\nvar a: bool\ninit { a && !a }\nevent e() { }"), ModelError::Code::EmptyInitial);
  EXPECT_EQ(error_code(slurp("hotel_2_3.egs"), {true, 10}), ModelError::Code::StateLimit);
}

TEST(Egs, InitEnumerationIsLexicographic) {
  TypedLks m = compile_lks(parse_model("model M\nvar a, b: bool\ninit { a || b }\nevent e() { }"));
  ASSERT_EQ(m.initial().size(), 3u);
  // (a,b) = (0,1), (1,0), (1,1)
  EXPECT_EQ(m.state_name(m.initial()[0]), "s0");
  EXPECT_FALSE(m.holds(StateId(0), PropId(0)));
  EXPECT_TRUE(m.holds(StateId(0), PropId(1)));
  EXPECT_TRUE(m.holds(StateId(1), PropId(0)));
  EXPECT_FALSE(m.holds(StateId(1), PropId(1)));
  EXPECT_TRUE(m.holds(StateId(2), PropId(0)) && m.holds(StateId(2), PropId(1)));
}

TEST(Egs, ConflictingEffectIsRuntimeError) {
  const char* text = R"(
model M
sort S = {x, y}
var v: S
init { v = x }
event e(a: S) modifies v { effect: forall b: S | v' := b }
)";
  EXPECT_EQ(error_code(text), ModelError::Code::Runtime);
}

namespace {

// Independent hand-written semantics of the bundled hotel model at scope
// 2 guests / 1 room / 3 keys, used as an oracle for the compiler.
struct HotelState {
  int current = 0, last = 0;
  unsigned gkeys[2] = {0, 0};
  unsigned occupant = 0;  // bit per guest
  auto operator<=>(const HotelState&) const = default;
};

std::map<HotelState, std::set<std::string>> hotel_oracle() {
  std::map<HotelState, std::set<std::string>> enabled;
  std::vector<HotelState> todo{HotelState{}};
  while (!todo.empty()) {
    HotelState s = todo.back();
    todo.pop_back();
    if (enabled.count(s)) continue;
    auto& out = enabled[s];
    std::vector<HotelState> next;
    for (int g = 0; g < 2; ++g) {
      std::string gs = "g" + std::to_string(g);
      if (s.occupant == 0 && s.last < 2) {
        HotelState t = s;
        t.gkeys[g] |= 1u << (s.last + 1);
        t.occupant |= 1u << g;
        t.last = s.last + 1;
        out.insert("In[" + gs + ",r0,k" + std::to_string(s.last + 1) + "]");
        next.push_back(t);
      }
      if (s.occupant & (1u << g)) {
        HotelState t = s;
        t.occupant = 0;
        out.insert("Out[" + gs + "]");
        next.push_back(t);
      }
      if (s.current < 2 && (s.gkeys[g] & (1u << (s.current + 1)))) {
        HotelState t = s;
        t.current = s.current + 1;
        out.insert("Entry[" + gs + ",r0,k" + std::to_string(s.current + 1) + "]");
        next.push_back(t);
      }
      if (s.gkeys[g] & (1u << s.current)) {
        out.insert("Reentry[" + gs + ",r0,k" + std::to_string(s.current) + "]");
        next.push_back(s);
      }
    }
    for (auto& t : next) todo.push_back(t);
  }
  return enabled;
}

HotelState decode(const TypedLks& m, StateId s) {
  HotelState h;
  for (int k = 0; k < 3; ++k) {
    if (m.holds(s, *m.find_prop("current[r0]=k" + std::to_string(k)))) h.current = k;
    if (m.holds(s, *m.find_prop("lastKey[r0]=k" + std::to_string(k)))) h.last = k;
    for (int g = 0; g < 2; ++g) {
      if (m.holds(s, *m.find_prop("gkeys[g" + std::to_string(g) + "][k" + std::to_string(k) + "]"))) {
        h.gkeys[g] |= 1u << k;
      }
    }
  }
  for (int g = 0; g < 2; ++g) {
    if (m.holds(s, *m.find_prop("occupant[r0][g" + std::to_string(g) + "]"))) h.occupant |= 1u << g;
  }
  return h;
}

}  // namespace

TEST(Egs, HotelMatchesHandWrittenSemantics) {
  TypedLks m = compile_lks(parse_model(slurp("hotel_2_3.egs")), {true});
  EXPECT_TRUE(validate_lks(m).empty());
  EXPECT_LE(m.num_states(), 4096u);
  auto oracle = hotel_oracle();
  ASSERT_EQ(m.num_states(), oracle.size());
  std::set<HotelState> seen;
  for (std::uint32_t i = 0; i < m.num_states(); ++i) {
    StateId s(i);
    HotelState h = decode(m, s);
    EXPECT_TRUE(seen.insert(h).second) << "labels must be injective";
    std::set<std::string> got;
    for (const Edge& e : m.successors(s)) {
      for (EventId a : e.events) {
        got.insert(m.event_name(a));
        // Frame: keys never change.
        for (PropId p : m.label(s)) {
          if (m.prop_name(p).rfind("keys[", 0) == 0) EXPECT_TRUE(m.holds(e.target, p));
        }
      }
    }
    EXPECT_EQ(got, oracle.at(h)) << m.state_name(s);
  }
}

TEST(Egs, HotelGroundingSizes) {
  EventSystem sys = parse_model(slurp("hotel_3_1-3.egs"));
  std::map<std::string, std::size_t> per_schema;
  for (const auto& g : ground(sys)) ++per_schema[sys.schemas[g.schema].name];
  EXPECT_EQ(per_schema["In"], 3u * 2u * 4u);
  EXPECT_EQ(per_schema["Out"], 3u);
  EXPECT_EQ(per_schema["Entry"], 24u);
  EXPECT_EQ(per_schema["Reentry"], 24u);
}

TEST(Egs, HotelPropertyBindsToCompiledModel) {
  EventSystem sys = parse_model(slurp("hotel_2_3.egs"));
  TypedLks m = compile_lks(sys, {true});
  Formula f = ground_property(sys, "BadSafety");
  EXPECT_EQ(f.op(), Op::Globally);
  EXPECT_NO_THROW(bind(f, m));
}

TEST(Egs, PropertyIndexMustBeStatic) {
  const char* text = R"(
model M
sort S = {x, y}
var v: S
var b[S]: bool
event e() { }
property P { G b[v] }
)";
  EventSystem sys = parse_model(text);
  EXPECT_THROW(ground_property(sys, "P"), ModelError);
}

TEST(Egs, PropertyComparisonsExpandOverValues) {
  const char* text = R"(
model M
sort S = {x, y, z} ordered
var v, w: S
event e() { }
property Eq { v = y }
property Lt { v < w }
property Next { next(v) = z }
)";
  EventSystem sys = parse_model(text);
  EXPECT_EQ(to_string(ground_property(sys, "Eq")), "v=y");
  EXPECT_EQ(to_string(ground_property(sys, "Next")), "v=y");
  // (x,y) (x,z) (y,z)
  EXPECT_EQ(to_string(ground_property(sys, "Lt")),
            "(((v=x && w=y) || (v=x && w=z)) || (v=y && w=z))");
}
