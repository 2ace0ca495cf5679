#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cexplore/formula.hpp"
#include "cexplore/lks.hpp"

namespace cexplore {

// Hash-consed formula DAG in negation normal form. Every Until and Finally
// node gets an acceptance index.
class FormulaTable {
 public:
  using NodeId = std::uint32_t;

  struct Node {
    Op op;
    std::int64_t atom = -1;  // Prop/Event/Type id; negated atoms are Not(atom)
    NodeId lhs = 0;
    NodeId rhs = 0;
    bool temporal = false;
    int acceptance = -1;  // Until/Finally only
    int leaf = -1;        // opaque non-temporal subformula, see intern_nnf
  };

  // f must be bound and in NNF.
  NodeId intern(const Formula& f);
  // intern(nnf(negate ? !f : f)) without building the intermediate formula.
  // With `opaque_boolean`, each maximal non-temporal compound subformula
  // becomes a single leaf that only eval_letter can look into.
  NodeId intern_nnf(const Formula& f, bool negate, bool opaque_boolean = false);

  void reserve(std::size_t n) {
    nodes_.reserve(n);
    index_.reserve(n);
  }
  const Node& node(NodeId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t num_acceptance_sets() const { return num_untils_; }

  // Value of a non-temporal node on the letter (valuation of s, event a).
  bool eval_letter(NodeId id, const TypedLks& lks, StateId s, EventId a) const;

 private:
  struct Key {
    Op op;
    std::int64_t atom;
    NodeId lhs, rhs;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  NodeId make(Op op, std::int64_t atom, NodeId lhs, NodeId rhs);
  NodeId make_leaf(const Formula& f, bool negate);

  struct Leaf {
    Formula formula;
    bool negate;
  };
  struct LeafKeyHash {
    std::size_t operator()(const std::pair<const void*, bool>& k) const {
      return std::hash<const void*>{}(k.first) ^ static_cast<std::size_t>(k.second);
    }
  };

  std::vector<Node> nodes_;
  std::unordered_map<Key, NodeId, KeyHash> index_;
  std::vector<Leaf> leaves_;
  std::unordered_map<std::pair<const void*, bool>, NodeId, LeafKeyHash> leaf_index_;
  std::size_t num_untils_ = 0;
};

// Letter constraint of an automaton transition: a conjunction of proposition
// literals, at most one required event, at most one required type, and
// excluded events and types.
struct LetterConstraint {
  std::vector<std::pair<PropId, bool>> props;  // sorted by prop id
  std::optional<EventId> event;
  std::vector<EventId> not_events;
  std::optional<TypeId> type;
  std::vector<TypeId> not_types;

  bool admits(const TypedLks& lks, StateId s, EventId a) const;
  // Some (valuation, event) letter of the model satisfies it.
  bool satisfiable(const TypedLks& lks) const;
  std::string to_string(const TypedLks& lks) const;

  friend bool operator==(const LetterConstraint&, const LetterConstraint&) = default;
};

// Explicit automaton over (valuation, event) letters with a single set of
// accepting transitions (generalised acceptance is degeneralised with a
// counter). State 0 is the unique initial state. Each state also records the
// obligations it stands for.
struct BuchiAutomaton {
  struct Transition {
    std::uint32_t target;
    LetterConstraint guard;
    bool accepting;
  };
  struct State {
    std::vector<Formula> obligations;
    std::uint32_t counter = 0;
    std::vector<Transition> out;
  };

  std::vector<State> states;
  std::size_t num_acceptance_sets = 0;

  std::size_t size() const { return states.size(); }
  std::string to_string(const TypedLks& lks) const;
};

// Tableau construction. f is put in NNF first; letter constraints that no
// letter of lks satisfies are dropped.
BuchiAutomaton ltl_to_buchi(const BoundFormula& f, const TypedLks& lks);

// Whether the automaton accepts the infinite word of pi.
bool automaton_accepts(const BuchiAutomaton& aut, const TypedLks& lks, const Lasso& pi);

// The same automaton built lazily: transitions are computed per concrete
// letter (s, a) of the model and memoised. Not thread safe; one per query.
class OnTheFlyAutomaton {
 public:
  using StateIndex = std::uint32_t;
  struct Move {
    StateIndex target;
    bool accepting;
  };

  OnTheFlyAutomaton(const TypedLks& lks, const BoundFormula& f);

  StateIndex initial() const { return 0; }
  std::span<const Move> successors(StateIndex q, StateId s, EventId a);
  std::size_t num_states() const { return states_.size(); }

 private:
  struct StateKey {
    std::vector<FormulaTable::NodeId> obligations;
    std::uint32_t counter;
    friend bool operator==(const StateKey&, const StateKey&) = default;
  };
  struct StateKeyHash {
    std::size_t operator()(const StateKey& k) const;
  };

  StateIndex intern_state(std::vector<FormulaTable::NodeId> obligations, std::uint32_t counter);

  const TypedLks& lks_;
  FormulaTable table_;
  std::vector<StateKey> states_;
  std::unordered_map<StateKey, StateIndex, StateKeyHash> state_index_;
  std::unordered_map<std::uint64_t, std::vector<Move>> memo_;
};

}  // namespace cexplore
