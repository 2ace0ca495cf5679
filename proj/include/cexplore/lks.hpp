#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cexplore/ids.hpp"

namespace cexplore {

struct EventInfo {
  std::string schema;
  std::vector<std::string> args;
  TypeId type;

  // "In[g0,r0,k1]", "stay[]"
  std::string identity() const;
};

// Outgoing transition (s, target) with its nonempty event label E(s, target).
struct Edge {
  StateId target;
  std::vector<EventId> events;  // sorted ascending
};

// Display metadata for a state variable of the source model. Boolean
// variables map to one proposition, sort-valued ones to a one-hot group.
struct StateVariable {
  std::string name;
  bool is_bool = true;
  PropId prop;                                           // is_bool
  std::vector<std::pair<std::string, PropId>> choices;   // !is_bool
};

// Typed labelled Kripke structure (S, I, P, L, T, Sigma, E, Upsilon, typing).
// Immutable once built; see LksBuilder.
class TypedLks {
 public:
  std::size_t num_states() const { return state_names_.size(); }
  std::size_t num_props() const { return prop_names_.size(); }
  std::size_t num_events() const { return events_.size(); }
  std::size_t num_types() const { return type_names_.size(); }

  const std::string& state_name(StateId s) const { return state_names_.at(s.index()); }
  const std::string& prop_name(PropId p) const { return prop_names_.at(p.index()); }
  const std::string& type_name(TypeId t) const { return type_names_.at(t.index()); }
  const EventInfo& event(EventId e) const { return events_.at(e.index()); }
  const std::string& event_name(EventId e) const { return event_identities_.at(e.index()); }
  TypeId type_of(EventId e) const { return events_[e.index()].type; }

  std::span<const StateId> initial() const { return initial_; }
  bool is_initial(StateId s) const;

  // Sorted proposition ids that hold in s.
  std::span<const PropId> label(StateId s) const { return labels_.at(s.index()); }
  bool holds(StateId s, PropId p) const { return valuation_[s.index() * num_props() + p.index()] != 0; }

  // Outgoing edges ordered by target id. Throws std::out_of_range on unknown s.
  std::span<const Edge> successors(StateId s) const { return edges_.at(s.index()); }
  // E(s, t) or nullptr when (s, t) is not in T.
  const std::vector<EventId>* events_between(StateId s, StateId t) const;

  std::optional<PropId> find_prop(std::string_view name) const;
  std::optional<EventId> find_event(std::string_view identity) const;
  std::optional<TypeId> find_type(std::string_view name) const;

  const std::vector<StateVariable>& variables() const { return variables_; }
  const std::string& name() const { return name_; }
  // First issue validate_lks reported when the model was built, if any.
  const std::optional<std::string>& first_issue() const { return first_issue_; }

 private:
  friend class LksBuilder;

  std::string name_;
  std::vector<std::string> state_names_;
  std::vector<StateId> initial_;
  std::vector<std::string> prop_names_;
  std::vector<std::vector<PropId>> labels_;
  std::vector<unsigned char> valuation_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<EventInfo> events_;
  std::vector<std::string> event_identities_;
  std::vector<std::string> type_names_;
  std::vector<StateVariable> variables_;
  std::optional<std::string> first_issue_;
  std::unordered_map<std::string, PropId> prop_index_;
  std::unordered_map<std::string, EventId> event_index_;
  std::unordered_map<std::string, TypeId> type_index_;
};

class LksBuilder {
 public:
  explicit LksBuilder(std::string name = "lks") { lks_.name_ = std::move(name); }

  PropId add_prop(std::string name);
  TypeId add_type(std::string name);
  EventId add_event(std::string schema, std::vector<std::string> args, TypeId type);
  StateId add_state(std::string name, std::vector<PropId> label);
  void add_initial(StateId s);
  // Adds events to E(s, t); creates (s, t) in T if absent.
  void add_transition(StateId s, StateId t, std::vector<EventId> events);
  void add_variable(StateVariable var) { lks_.variables_.push_back(std::move(var)); }

  std::size_t num_states() const { return lks_.state_names_.size(); }

  // Finalizes orderings. Does not validate; use validate_lks.
  TypedLks build() &&;

 private:
  TypedLks lks_;
  std::vector<std::unordered_map<std::uint32_t, std::vector<EventId>>> pending_;
};

struct LksIssue {
  enum class Kind { Deadlock, EmptyLabel, EmptyInitial, DanglingType, UnknownProp, UnknownEvent, UnknownState };
  Kind kind;
  StateId source{};
  StateId target{};
  std::string detail;

  friend bool operator==(const LksIssue&, const LksIssue&) = default;
};

using ValidationReport = std::vector<LksIssue>;

// Reports every violated structural invariant; empty iff lks is well formed.
ValidationReport validate_lks(const TypedLks& lks);

std::string to_string(const LksIssue& issue);

// Lasso representation of an infinite path: positions 0..size()-1 are stored,
// and the transition out of the last position (labelled events.back()) goes
// back to position loop_start. prefix = [0, loop_start), loop = [loop_start, size).
struct Lasso {
  std::vector<StateId> states;
  std::vector<EventId> events;
  std::size_t loop_start = 0;

  std::size_t size() const { return states.size(); }
  std::size_t loop_length() const { return states.size() - loop_start; }
  std::size_t successor(std::size_t j) const { return j + 1 < states.size() ? j + 1 : loop_start; }

  std::span<const StateId> prefix_states() const { return {states.data(), loop_start}; }
  std::span<const EventId> prefix_events() const { return {events.data(), loop_start}; }
  std::span<const StateId> loop_states() const { return std::span(states).subspan(loop_start); }
  std::span<const EventId> loop_events() const { return std::span(events).subspan(loop_start); }

  friend bool operator==(const Lasso&, const Lasso&) = default;
};

struct Step {
  StateId state;
  EventId event;
  friend bool operator==(const Step&, const Step&) = default;
};

// Position j of the infinite unrolling; j maps into the loop modulo its length.
std::size_t lasso_position(const Lasso& pi, std::size_t j);
Step unroll(const Lasso& pi, std::size_t j);

// True iff pi is a path of lks: s_0 initial, every step a labelled transition.
bool is_path_of(const TypedLks& lks, const Lasso& pi);

}  // namespace cexplore
