#include "cexplore/buchi.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

#include "cexplore/detail/nested_dfs.hpp"

namespace cexplore {

using NodeId = FormulaTable::NodeId;

// ---------------------------------------------------------------------------
// FormulaTable

std::size_t FormulaTable::KeyHash::operator()(const Key& k) const {
  std::size_t h = std::hash<std::int64_t>{}(k.atom);
  for (std::size_t v : {static_cast<std::size_t>(k.op), static_cast<std::size_t>(k.lhs), static_cast<std::size_t>(k.rhs)}) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

NodeId FormulaTable::make(Op op, std::int64_t atom, NodeId lhs, NodeId rhs) {
  auto [it, fresh] = index_.try_emplace(Key{op, atom, lhs, rhs}, static_cast<NodeId>(nodes_.size()));
  if (!fresh) return it->second;
  Node n{op, atom, lhs, rhs};
  if (!is_atom(op)) {
    n.temporal = nodes_[lhs].temporal || (is_binary(op) && nodes_[rhs].temporal);
  }
  if (op == Op::Next || op == Op::Globally || op == Op::Finally || op == Op::Until || op == Op::Release) {
    n.temporal = true;
  }
  if (op == Op::Until || op == Op::Finally) n.acceptance = static_cast<int>(num_untils_++);
  nodes_.push_back(n);
  return it->second;
}

NodeId FormulaTable::intern(const Formula& f) {
  if (is_atom(f.op())) {
    if (f.op() != Op::True && f.op() != Op::False && f.atom().id < 0) {
      throw std::invalid_argument("formula is not bound: " + f.atom().name);
    }
    return make(f.op(), f.op() == Op::True || f.op() == Op::False ? -1 : f.atom().id, 0, 0);
  }
  if (f.op() == Op::Not && !is_atom(f.child().op())) {
    throw std::invalid_argument("formula is not in negation normal form");
  }
  NodeId lhs = intern(f.lhs());
  NodeId rhs = is_binary(f.op()) ? intern(f.rhs()) : 0;
  return make(f.op(), -1, lhs, rhs);
}

NodeId FormulaTable::make_leaf(const Formula& f, bool negate) {
  auto [it, fresh] = leaf_index_.try_emplace({f.identity(), negate}, static_cast<NodeId>(nodes_.size()));
  if (!fresh) return it->second;
  Node n{f.op()};
  n.leaf = static_cast<int>(leaves_.size());
  leaves_.push_back({f, negate});
  nodes_.push_back(n);
  return it->second;
}

NodeId FormulaTable::intern_nnf(const Formula& f, bool negate, bool opaque_boolean) {
  if (opaque_boolean && !f.is_temporal() && !is_atom(f.op()) &&
      !(f.op() == Op::Not && is_atom(f.child().op()))) {
    return make_leaf(f, negate);
  }
  switch (f.op()) {
    case Op::True:
    case Op::False: return make((f.op() == Op::True) != negate ? Op::True : Op::False, -1, 0, 0);
    case Op::Prop:
    case Op::Event:
    case Op::Type: {
      NodeId atom = intern(f);
      return negate ? make(Op::Not, -1, atom, 0) : atom;
    }
    case Op::Not: return intern_nnf(f.child(), !negate, opaque_boolean);
    case Op::Next: return make(Op::Next, -1, intern_nnf(f.child(), negate, opaque_boolean), 0);
    case Op::Globally:
    case Op::Finally: {
      Op op = (f.op() == Op::Globally) != negate ? Op::Globally : Op::Finally;
      return make(op, -1, intern_nnf(f.child(), negate, opaque_boolean), 0);
    }
    case Op::And:
    case Op::Or:
    case Op::Until:
    case Op::Release: {
      Op op = f.op();
      if (negate) {
        op = op == Op::And ? Op::Or : op == Op::Or ? Op::And : op == Op::Until ? Op::Release : Op::Until;
      }
      NodeId lhs = intern_nnf(f.lhs(), negate, opaque_boolean);
      NodeId rhs = intern_nnf(f.rhs(), negate, opaque_boolean);
      return make(op, -1, lhs, rhs);
    }
  }
  throw std::invalid_argument("unknown operator");
}

bool FormulaTable::eval_letter(NodeId id, const TypedLks& lks, StateId s, EventId a) const {
  const Node& n = nodes_[id];
  if (n.leaf >= 0) {
    const Leaf& leaf = leaves_[static_cast<std::size_t>(n.leaf)];
    return leaf.negate != leaf.formula.eval_boolean([&](Op op, std::int64_t atom) {
      switch (op) {
        case Op::Prop: return lks.holds(s, PropId(static_cast<std::size_t>(atom)));
        case Op::Event: return a.value == atom;
        default: return lks.type_of(a).value == atom;
      }
    });
  }
  switch (n.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Prop: return lks.holds(s, PropId(static_cast<std::size_t>(n.atom)));
    case Op::Event: return a.value == n.atom;
    case Op::Type: return lks.type_of(a).value == n.atom;
    case Op::Not: return !eval_letter(n.lhs, lks, s, a);
    case Op::And: return eval_letter(n.lhs, lks, s, a) && eval_letter(n.rhs, lks, s, a);
    case Op::Or: return eval_letter(n.lhs, lks, s, a) || eval_letter(n.rhs, lks, s, a);
    default: throw std::logic_error("eval_letter on a temporal formula");
  }
}

// ---------------------------------------------------------------------------
// LetterConstraint

bool LetterConstraint::admits(const TypedLks& lks, StateId s, EventId a) const {
  for (auto [p, value] : props) {
    if (lks.holds(s, p) != value) return false;
  }
  if (event && *event != a) return false;
  if (std::find(not_events.begin(), not_events.end(), a) != not_events.end()) return false;
  TypeId t = lks.type_of(a);
  if (type && *type != t) return false;
  return std::find(not_types.begin(), not_types.end(), t) == not_types.end();
}

bool LetterConstraint::satisfiable(const TypedLks& lks) const {
  auto fits = [&](EventId a) {
    if (std::find(not_events.begin(), not_events.end(), a) != not_events.end()) return false;
    TypeId t = lks.type_of(a);
    if (type && *type != t) return false;
    return std::find(not_types.begin(), not_types.end(), t) == not_types.end();
  };
  if (event) return fits(*event);
  for (std::size_t e = 0; e < lks.num_events(); ++e) {
    if (fits(EventId(e))) return true;
  }
  return false;
}

std::string LetterConstraint::to_string(const TypedLks& lks) const {
  std::vector<std::string> parts;
  for (auto [p, value] : props) parts.push_back((value ? "" : "!") + lks.prop_name(p));
  if (event) parts.push_back("@" + lks.event_name(*event));
  for (EventId e : not_events) parts.push_back("!@" + lks.event_name(e));
  if (type) parts.push_back("@" + lks.type_name(*type));
  for (TypeId t : not_types) parts.push_back("!@" + lks.type_name(t));
  if (parts.empty()) return "true";
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out += " && " + parts[i];
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// One-step tableau expansion of an obligation set.
//
// With a concrete letter, non-temporal subformulas are decided on the spot,
// and branches that are dominated (same letter, fewer obligations, fewer
// postponed untils) are not generated. Without a letter, literals are
// collected into a LetterConstraint.

struct Expansion {
  std::vector<NodeId> next;
  std::uint64_t pending = 0;
  LetterConstraint guard;
};

struct Letter {
  StateId state;
  EventId event;
};

bool add_literal(LetterConstraint& g, Op op, std::int64_t atom, bool positive) {
  switch (op) {
    case Op::Prop: {
      PropId p(static_cast<std::size_t>(atom));
      auto it = std::lower_bound(g.props.begin(), g.props.end(), p,
                                 [](const auto& lit, PropId v) { return lit.first < v; });
      if (it != g.props.end() && it->first == p) return it->second == positive;
      g.props.insert(it, {p, positive});
      return true;
    }
    case Op::Event: {
      EventId e(static_cast<std::size_t>(atom));
      bool excluded = std::find(g.not_events.begin(), g.not_events.end(), e) != g.not_events.end();
      if (positive) {
        if ((g.event && *g.event != e) || excluded) return false;
        g.event = e;
      } else {
        if (g.event && *g.event == e) return false;
        if (!excluded) g.not_events.insert(std::upper_bound(g.not_events.begin(), g.not_events.end(), e), e);
      }
      return true;
    }
    case Op::Type: {
      TypeId t(static_cast<std::size_t>(atom));
      bool excluded = std::find(g.not_types.begin(), g.not_types.end(), t) != g.not_types.end();
      if (positive) {
        if ((g.type && *g.type != t) || excluded) return false;
        g.type = t;
      } else {
        if (g.type && *g.type == t) return false;
        if (!excluded) g.not_types.insert(std::upper_bound(g.not_types.begin(), g.not_types.end(), t), t);
      }
      return true;
    }
    default: return false;
  }
}

std::uint64_t acceptance_bit(const FormulaTable::Node& n) {
  if (n.acceptance >= 64) throw std::length_error("more than 64 until subformulas");
  return std::uint64_t{1} << n.acceptance;
}

std::vector<Expansion> expand(const FormulaTable& table, const std::vector<NodeId>& obligations,
                              const TypedLks& lks, const std::optional<Letter>& letter) {
  struct Branch {
    std::vector<NodeId> todo;
    Expansion out;
  };
  std::vector<Expansion> results;
  std::vector<Branch> stack;
  stack.push_back({obligations, {}});

  auto decided = [&](NodeId id, bool& value) {
    if (!letter || table.node(id).temporal) return false;
    value = table.eval_letter(id, lks, letter->state, letter->event);
    return true;
  };

  while (!stack.empty()) {
    Branch br = std::move(stack.back());
    stack.pop_back();
    bool alive = true;
    while (alive && !br.todo.empty()) {
      NodeId id = br.todo.back();
      br.todo.pop_back();
      const auto& n = table.node(id);
      bool value = false;
      if (decided(id, value)) {
        alive = value;
        continue;
      }
      switch (n.op) {
        case Op::True: break;
        case Op::False: alive = false; break;
        case Op::Prop:
        case Op::Event:
        case Op::Type: alive = add_literal(br.out.guard, n.op, n.atom, true); break;
        case Op::Not: {
          const auto& atom = table.node(n.lhs);
          alive = add_literal(br.out.guard, atom.op, atom.atom, false);
          break;
        }
        case Op::And:
          br.todo.push_back(n.rhs);
          br.todo.push_back(n.lhs);
          break;
        case Op::Or: {
          bool lv = false, rv = false;
          if (decided(n.lhs, lv) && lv) break;
          if (decided(n.rhs, rv) && rv) break;
          bool ld = decided(n.lhs, lv), rd = decided(n.rhs, rv);
          if (ld) {  // lhs false
            br.todo.push_back(n.rhs);
          } else if (rd) {
            br.todo.push_back(n.lhs);
          } else {
            Branch alt = br;
            alt.todo.push_back(n.rhs);
            stack.push_back(std::move(alt));
            br.todo.push_back(n.lhs);
          }
          break;
        }
        case Op::Next: br.out.next.push_back(n.lhs); break;
        case Op::Globally:
          br.out.next.push_back(id);
          br.todo.push_back(n.lhs);
          break;
        case Op::Finally:
        case Op::Until: {
          // Fulfil now (rhs) or postpone (lhs now, the until next).
          NodeId goal = n.op == Op::Finally ? n.lhs : n.rhs;
          bool gv = false;
          if (decided(goal, gv)) {
            if (gv) break;
            if (n.op == Op::Until) br.todo.push_back(n.lhs);
            br.out.next.push_back(id);
            br.out.pending |= acceptance_bit(n);
            break;
          }
          Branch later = br;
          if (n.op == Op::Until) later.todo.push_back(n.lhs);
          later.out.next.push_back(id);
          later.out.pending |= acceptance_bit(n);
          stack.push_back(std::move(later));
          br.todo.push_back(goal);
          break;
        }
        case Op::Release: {
          // rhs holds now, and either lhs holds now or the release continues.
          bool lv = false;
          br.todo.push_back(n.rhs);
          if (decided(n.lhs, lv)) {
            if (!lv) br.out.next.push_back(id);
            break;
          }
          Branch later = br;
          later.out.next.push_back(id);
          stack.push_back(std::move(later));
          br.todo.push_back(n.lhs);
          break;
        }
      }
    }
    if (!alive) continue;
    auto& next = br.out.next;
    next.erase(std::remove_if(next.begin(), next.end(), [&](NodeId x) { return table.node(x).op == Op::True; }),
               next.end());
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    results.push_back(std::move(br.out));
  }
  return results;
}

// Counter-based degeneralisation of a transition that leaves `pending`
// untils unfulfilled.
std::pair<std::uint32_t, bool> advance_counter(std::uint32_t counter, std::uint64_t pending, std::size_t sets) {
  if (sets == 0) return {0, true};
  std::uint32_t c = counter;
  while (c < sets && !((pending >> c) & 1u)) ++c;
  if (c == sets) return {0, true};
  return {c, false};
}

std::string state_key(const std::vector<NodeId>& obligations, std::uint32_t counter) {
  std::string key = std::to_string(counter) + "|";
  for (NodeId id : obligations) key += std::to_string(id) + ",";
  return key;
}

}  // namespace

// ---------------------------------------------------------------------------
// Explicit construction

BuchiAutomaton ltl_to_buchi(const BoundFormula& f, const TypedLks& lks) {
  FormulaTable table;
  std::vector<Formula> formula_of;
  std::function<void(const Formula&)> record = [&](const Formula& g) {
    NodeId id = table.intern(g);
    if (formula_of.size() <= id) formula_of.resize(id + 1);
    formula_of[id] = g;
    if (!is_atom(g.op())) {
      record(g.lhs());
      if (is_binary(g.op())) record(g.rhs());
    }
  };
  Formula root = nnf(f.formula());
  record(root);
  NodeId root_id = table.intern(root);

  BuchiAutomaton aut;
  aut.num_acceptance_sets = table.num_acceptance_sets();
  std::map<std::string, std::uint32_t> index;
  std::vector<std::vector<NodeId>> obligations_of;
  std::deque<std::uint32_t> work;

  auto intern_state = [&](std::vector<NodeId> obligations, std::uint32_t counter) {
    auto [it, fresh] = index.emplace(state_key(obligations, counter), static_cast<std::uint32_t>(aut.states.size()));
    if (fresh) {
      BuchiAutomaton::State st;
      st.counter = counter;
      for (NodeId id : obligations) st.obligations.push_back(formula_of[id]);
      aut.states.push_back(std::move(st));
      obligations_of.push_back(std::move(obligations));
      work.push_back(it->second);
    }
    return it->second;
  };

  std::vector<NodeId> init;
  if (table.node(root_id).op != Op::True) init.push_back(root_id);
  intern_state(init, 0);

  while (!work.empty()) {
    std::uint32_t q = work.front();
    work.pop_front();
    auto expansions = expand(table, obligations_of[q], lks, std::nullopt);
    for (auto& ex : expansions) {
      if (!ex.guard.satisfiable(lks)) continue;
      auto [counter, accepting] = advance_counter(aut.states[q].counter, ex.pending, table.num_acceptance_sets());
      std::uint32_t target = intern_state(std::move(ex.next), counter);
      aut.states[q].out.push_back({target, std::move(ex.guard), accepting});
    }
  }
  return aut;
}

std::string BuchiAutomaton::to_string(const TypedLks& lks) const {
  std::string out;
  for (std::size_t q = 0; q < states.size(); ++q) {
    out += "q" + std::to_string(q) + " {";
    for (std::size_t i = 0; i < states[q].obligations.size(); ++i) {
      if (i) out += ", ";
      out += cexplore::to_string(states[q].obligations[i]);
    }
    out += "} c=" + std::to_string(states[q].counter) + "\n";
    for (const auto& t : states[q].out) {
      out += "  -[" + t.guard.to_string(lks) + "]-> q" + std::to_string(t.target) + (t.accepting ? " (acc)" : "") +
             "\n";
    }
  }
  return out;
}

bool automaton_accepts(const BuchiAutomaton& aut, const TypedLks& lks, const Lasso& pi) {
  // Product node: ((position * |Q| + q) << 1) | arrived-by-accepting-transition.
  const std::uint64_t nq = aut.size();
  auto successors = [&](std::uint64_t node, std::vector<std::uint64_t>& out) {
    std::uint64_t body = node >> 1;
    std::size_t j = body / nq;
    std::uint32_t q = static_cast<std::uint32_t>(body % nq);
    std::size_t nj = pi.successor(j);
    for (const auto& t : aut.states[q].out) {
      if (!t.guard.admits(lks, pi.states[j], pi.events[j])) continue;
      out.push_back(((nj * nq + t.target) << 1) | (t.accepting ? 1u : 0u));
    }
  };
  detail::NestedDfs ndfs(successors);
  return ndfs.from(0);
}

// ---------------------------------------------------------------------------
// On-the-fly construction

OnTheFlyAutomaton::OnTheFlyAutomaton(const TypedLks& lks, const BoundFormula& f) : lks_(lks) {
  table_.reserve(f.formula().size());
  NodeId root = table_.intern_nnf(f.formula(), false, true);
  std::vector<NodeId> init;
  if (table_.node(root).op != Op::True) init.push_back(root);
  intern_state(std::move(init), 0);
}

std::size_t OnTheFlyAutomaton::StateKeyHash::operator()(const StateKey& k) const {
  std::size_t h = k.counter;
  for (NodeId id : k.obligations) h ^= id + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

OnTheFlyAutomaton::StateIndex OnTheFlyAutomaton::intern_state(std::vector<NodeId> obligations,
                                                              std::uint32_t counter) {
  StateKey key{std::move(obligations), counter};
  auto it = state_index_.find(key);
  if (it != state_index_.end()) return it->second;
  auto index = static_cast<StateIndex>(states_.size());
  states_.push_back(key);
  state_index_.emplace(std::move(key), index);
  return index;
}

std::span<const OnTheFlyAutomaton::Move> OnTheFlyAutomaton::successors(StateIndex q, StateId s, EventId a) {
  std::uint64_t key = (static_cast<std::uint64_t>(q) * lks_.num_states() + s.value) * lks_.num_events() + a.value;
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;

  std::vector<Move> moves;
  auto expansions = expand(table_, states_[q].obligations, lks_, Letter{s, a});
  const std::uint32_t counter = states_[q].counter;
  for (auto& ex : expansions) {
    auto [next_counter, accepting] = advance_counter(counter, ex.pending, table_.num_acceptance_sets());
    StateIndex target = intern_state(std::move(ex.next), next_counter);
    Move m{target, accepting};
    auto same = [&](const Move& o) { return o.target == m.target && o.accepting == m.accepting; };
    if (std::none_of(moves.begin(), moves.end(), same)) moves.push_back(m);
  }
  std::sort(moves.begin(), moves.end(), [](const Move& x, const Move& y) {
    return x.target != y.target ? x.target < y.target : x.accepting > y.accepting;
  });
  return memo_.emplace(key, std::move(moves)).first->second;
}

}  // namespace cexplore
