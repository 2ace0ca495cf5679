#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cexplore/formula.hpp"
#include "cexplore/lexer.hpp"
#include "cexplore/lks.hpp"

namespace cexplore {

// Guarded-event model language.
//
//   model Hotel
//   sort Key = {k0, k1, k2} ordered
//   var current[Room]: Key
//   var gkeys[Guest][Key]: bool
//   init { forall g: Guest, k: Key | !gkeys[g][k] }
//   event In(g: Guest, r: Room, k: Key) modifies gkeys, occupant, lastKey {
//     guard: ...
//     effect: gkeys[g][k]' := true; occupant[r][g]' := true; lastKey[r]' := k
//   }
//   event setA() : Set modifies p { guard: !p effect: p' := true }
//   property BadSafety { G (forall r: Room, g: Guest, k: Key | ...) }
//
// An event's type is the name after ':' and defaults to the schema name.
// Expressions: true false ! && || -> = != < <= > >= (order comparisons need
// an ordered sort), forall/exists x: S, y: T | body, next(t) prev(t)
// min(S) max(S). next(max(S)) is undefined and every comparison involving
// an undefined value is false. Property bodies additionally allow
// X G F U, @Schema[args] event atoms and @Type type atoms.

class ModelError : public std::runtime_error {
 public:
  enum class Code { Syntax, Type, FrameViolation, EmptyInitial, Deadlock, StateLimit, Runtime };

  ModelError(Code code, const std::string& message, std::optional<SourceLocation> where = std::nullopt,
             std::vector<std::string> states = {});

  Code code() const { return code_; }
  const std::string& message() const { return message_; }
  const std::optional<SourceLocation>& location() const { return where_; }
  // Deadlock: the deadlocked states, as "s3{p=true,...}" descriptions.
  const std::vector<std::string>& states() const { return states_; }

 private:
  Code code_;
  std::string message_;
  std::optional<SourceLocation> where_;
  std::vector<std::string> states_;
};

const char* to_string(ModelError::Code code);

struct ModelSort {
  std::string name;
  std::vector<std::string> values;
  bool ordered = false;
};

struct ModelVar {
  std::string name;
  std::vector<std::size_t> index_sorts;
  std::optional<std::size_t> value_sort;  // empty for bool
  std::size_t first_cell = 0;
  std::size_t num_cells = 1;

  bool is_bool() const { return !value_sort; }
};

// Typed expression tree. `type` is kBool or a sort index.
struct ModelExpr {
  enum class Kind : std::uint8_t {
    BoolConst,  // value: 0/1
    SortConst,  // value: index into the sort
    Binder,     // value: environment slot
    VarRead,    // value: var index; kids: index terms
    Next,
    Prev,
    Not,
    And,
    Or,
    Implies,
    Compare,  // value: CompareOp
    Forall,   // value: environment slot, sort: bound sort; kids[0]: body
    Exists,
    EventAtom,  // value: schema index; kids: argument terms
    TypeAtom,   // name: type name
    TNext,
    TGlobally,
    TFinally,
    TUntil,
  };
  enum CompareOp : int { Eq, Ne, Lt, Le, Gt, Ge };
  static constexpr int kBool = -1;

  Kind kind = Kind::BoolConst;
  int type = kBool;
  int value = 0;
  int sort = -1;
  std::string name;
  std::vector<ModelExpr> kids;
  SourceLocation where;
};

struct ModelAssignment {
  // Plain assignment when `sort` < 0, else forall over `sort` bound to `slot`.
  int sort = -1;
  int slot = -1;
  std::size_t var = 0;
  std::vector<ModelExpr> index;
  ModelExpr value;
  std::vector<ModelAssignment> body;
  SourceLocation where;
};

struct EventSchema {
  std::string name;
  std::string type;
  std::vector<std::pair<std::string, std::size_t>> params;  // name, sort
  std::vector<std::size_t> modifies;                        // var indices
  ModelExpr guard;
  std::vector<ModelAssignment> effect;
  std::size_t num_slots = 0;  // environment size needed by guard and effect
};

struct ModelProperty {
  std::string name;
  ModelExpr body;
  std::size_t num_slots = 0;
};

struct EventSystem {
  std::string name;
  std::vector<ModelSort> sorts;
  std::vector<ModelVar> vars;
  std::vector<ModelExpr> init;  // conjoined
  std::size_t init_slots = 0;
  std::vector<EventSchema> schemas;
  std::vector<ModelProperty> properties;
  std::size_t num_cells = 0;

  std::optional<std::size_t> find_sort(std::string_view name) const;
  std::optional<std::size_t> find_var(std::string_view name) const;
  std::optional<std::size_t> find_schema(std::string_view name) const;
  const ModelProperty* find_property(std::string_view name) const;
  // Type names in first-appearance order over the schemas.
  std::vector<std::string> type_names() const;
};

// Throws ModelError (Syntax, Type or FrameViolation) with a location.
EventSystem parse_model(std::string_view text);

struct GroundEvent {
  std::size_t schema = 0;
  std::vector<std::size_t> args;  // value index per parameter
  std::string identity;           // "In[g0,r0,k1]"
};

// Schemas in declaration order, argument tuples lexicographically.
std::vector<GroundEvent> ground(const EventSystem& sys);

struct CompileOptions {
  bool add_idle = false;
  std::size_t state_limit = 200000;
};

// Reachable-state enumeration. States are numbered breadth first with the
// initial valuations first, in lexicographic order. Propositions: one per
// bool cell ("gkeys[g0][k1]") and one per sort cell and value
// ("current[r0]=k1"), in declaration order. When add_idle is set and some
// state has no enabled event, an event idle[] of type Idle is added as a
// self-loop on exactly those states.
TypedLks compile_lks(const EventSystem& sys, const CompileOptions& opts = {});

// The named property with quantifiers expanded, over the compiled model's
// proposition, event and type names. Throws ModelError(Type) for an unknown
// name or a proposition whose index depends on the state.
Formula ground_property(const EventSystem& sys, std::string_view name);

// `text` names a property of sys, or is a formula over the compiled names.
// Throws ParseError or UnknownAtom for a bad formula.
BoundFormula resolve_property(const EventSystem& sys, const TypedLks& lks, std::string_view text);

}  // namespace cexplore
