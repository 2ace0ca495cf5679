#include "cexplore/checker.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>

#include "cexplore/buchi.hpp"
#include "cexplore/detail/nested_dfs.hpp"
#include "cexplore/eval.hpp"

namespace cexplore {

namespace {

using AutState = OnTheFlyAutomaton::StateIndex;

void require_checkable(const TypedLks& lks, std::size_t bound) {
  if (bound == 0) throw std::invalid_argument("bound must be at least 1");
  if (lks.first_issue()) throw std::invalid_argument("malformed model: " + *lks.first_issue());
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

// Product states (s, q) from which an accepting product cycle is reachable,
// over the part of the product reachable from the initial states. Computed
// with an iterative Tarjan decomposition; SCCs complete in reverse
// topological order, so successors are classified first.
class LiveProductStates {
 public:
  LiveProductStates(const TypedLks& lks, OnTheFlyAutomaton& aut) {
    for (StateId s0 : lks.initial()) explore(lks, aut, node_of(s0, aut.initial()));
  }

  bool live(StateId s, AutState q) const {
    auto it = index_.find(key(s, q));
    return it != index_.end() && live_[it->second];
  }
  std::size_t size() const { return live_.size(); }

 private:
  struct Out {
    std::uint32_t target;
    bool accepting;
  };

  static std::uint64_t key(StateId s, AutState q) { return (static_cast<std::uint64_t>(q) << 32) | s.value; }

  std::uint32_t node_of(StateId s, AutState q) {
    auto [it, fresh] = index_.emplace(key(s, q), static_cast<std::uint32_t>(states_.size()));
    if (fresh) {
      states_.push_back({s, q});
      adjacency_.emplace_back();
      expanded_.push_back(false);
      order_.push_back(kUnvisited);
      low_.push_back(0);
      on_stack_.push_back(false);
      component_.push_back(kUnvisited);
      live_.push_back(false);
    }
    return it->second;
  }

  void expand(const TypedLks& lks, OnTheFlyAutomaton& aut, std::uint32_t v) {
    if (expanded_[v]) return;
    expanded_[v] = true;
    auto [s, q] = states_[v];
    std::vector<Out> out;
    for (const Edge& edge : lks.successors(s)) {
      for (EventId a : edge.events) {
        for (const auto& m : aut.successors(q, s, a)) out.push_back({node_of(edge.target, m.target), m.accepting});
      }
    }
    adjacency_[v] = std::move(out);
  }

  void explore(const TypedLks& lks, OnTheFlyAutomaton& aut, std::uint32_t root) {
    if (order_[root] != kUnvisited) return;
    struct Frame {
      std::uint32_t node;
      std::size_t next_edge;
    };
    std::vector<Frame> call;
    auto enter = [&](std::uint32_t v) {
      order_[v] = low_[v] = counter_++;
      stack_.push_back(v);
      on_stack_[v] = true;
      expand(lks, aut, v);
      call.push_back({v, 0});
    };
    enter(root);
    while (!call.empty()) {
      Frame& f = call.back();
      std::uint32_t v = f.node;
      if (f.next_edge < adjacency_[v].size()) {
        std::uint32_t w = adjacency_[v][f.next_edge++].target;
        if (order_[w] == kUnvisited) {
          enter(w);
        } else if (on_stack_[w]) {
          low_[v] = std::min(low_[v], order_[w]);
        }
        continue;
      }
      call.pop_back();
      if (!call.empty()) low_[call.back().node] = std::min(low_[call.back().node], low_[v]);
      if (low_[v] != order_[v]) continue;

      std::vector<std::uint32_t> members;
      std::uint32_t w;
      do {
        w = stack_.back();
        stack_.pop_back();
        on_stack_[w] = false;
        component_[w] = components_;
        members.push_back(w);
      } while (w != v);
      bool live = false;
      for (std::uint32_t m : members) {
        for (const Out& e : adjacency_[m]) {
          if (component_[e.target] == components_ ? e.accepting : live_[e.target]) live = true;
        }
      }
      for (std::uint32_t m : members) live_[m] = live;
      ++components_;
    }
  }

  static constexpr std::uint32_t kUnvisited = static_cast<std::uint32_t>(-1);

  std::unordered_map<std::uint64_t, std::uint32_t> index_;
  std::vector<std::pair<StateId, AutState>> states_;
  std::vector<std::vector<Out>> adjacency_;
  std::vector<bool> expanded_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> low_;
  std::vector<bool> on_stack_;
  std::vector<std::uint32_t> component_;
  std::vector<bool> live_;
  std::vector<std::uint32_t> stack_;
  std::uint32_t counter_ = 0;
  std::uint32_t components_ = 0;
};

class BoundedLassoSearch {
 public:
  BoundedLassoSearch(const TypedLks& lks, const BoundFormula& phi)
      : lks_(lks), aut_(lks, !phi), live_(lks, aut_) {}

  std::optional<Lasso> run(std::size_t bound) {
    for (std::size_t length = 1; length <= bound; ++length) {
      for (StateId s0 : lks_.initial()) {
        if (!live_.live(s0, aut_.initial())) continue;
        states_.assign(1, s0);
        events_.clear();
        runs_.assign(1, {aut_.initial()});
        if (extend(length)) return found_;
      }
    }
    return std::nullopt;
  }

  CheckStats stats() const {
    CheckStats st;
    st.states_visited = visited_;
    st.lassos_checked = lassos_;
    st.automaton_states = aut_.num_states();
    st.product_states = live_.size();
    return st;
  }

 private:
  // Automaton states reachable after reading (s, a) from `from`, restricted
  // to those that are live at `target`.
  std::vector<AutState> step(const std::vector<AutState>& from, StateId s, EventId a, StateId target) {
    std::vector<AutState> out;
    for (AutState q : from) {
      for (const auto& m : aut_.successors(q, s, a)) {
        if (live_.live(target, m.target)) out.push_back(m.target);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool extend(std::size_t length) {
    ++visited_;
    const std::size_t k = states_.size() - 1;
    const StateId s = states_[k];
    if (k + 1 == length) return close(k);
    for (const Edge& edge : lks_.successors(s)) {
      for (EventId a : edge.events) {
        auto next = step(runs_[k], s, a, edge.target);
        if (next.empty()) continue;
        states_.push_back(edge.target);
        events_.push_back(a);
        runs_.push_back(std::move(next));
        if (extend(length)) return true;
        states_.pop_back();
        events_.pop_back();
        runs_.pop_back();
      }
    }
    return false;
  }

  bool close(std::size_t k) {
    for (std::size_t l = k + 1; l-- > 0;) {
      const auto* label = lks_.events_between(states_[k], states_[l]);
      if (!label) continue;
      for (EventId a : *label) {
        ++lassos_;
        if (loop_accepts(k, l, a)) {
          found_ = Lasso{states_, events_, l};
          found_.events.push_back(a);
          return true;
        }
      }
    }
    return false;
  }

  // Accepting cycle in the product of the loop [l, k] (closed by `last`)
  // with the automaton, entered with the runs that reach position l.
  bool loop_accepts(std::size_t k, std::size_t l, EventId last) {
    auto successors = [&](std::uint64_t node, std::vector<std::uint64_t>& out) {
      std::size_t j = static_cast<std::size_t>((node >> 1) & 0xffffff);
      AutState q = static_cast<AutState>(node >> 25);
      EventId a = j == k ? last : events_[j];
      std::size_t nj = j == k ? l : j + 1;
      for (const auto& m : aut_.successors(q, states_[j], a)) {
        if (!live_.live(states_[nj], m.target)) continue;
        out.push_back((static_cast<std::uint64_t>(m.target) << 25) | (nj << 1) | (m.accepting ? 1u : 0u));
      }
    };
    detail::NestedDfs ndfs(successors);
    for (AutState q : runs_[l]) {
      if (ndfs.from((static_cast<std::uint64_t>(q) << 25) | (l << 1))) return true;
    }
    return false;
  }

  const TypedLks& lks_;
  OnTheFlyAutomaton aut_;
  LiveProductStates live_;
  std::vector<StateId> states_;
  std::vector<EventId> events_;
  std::vector<std::vector<AutState>> runs_;
  Lasso found_;
  std::size_t visited_ = 0;
  std::size_t lassos_ = 0;
};

}  // namespace

CheckResult find_counterexample(const TypedLks& lks, const BoundFormula& phi, std::size_t bound) {
  require_checkable(lks, bound);
  auto start = std::chrono::steady_clock::now();
  BoundedLassoSearch search(lks, phi);
  CheckResult result;
  result.bound = bound;
  result.counterexample = search.run(bound);
  result.stats = search.stats();
  result.stats.query_ms = elapsed_ms(start);
  return result;
}

std::size_t for_each_lasso(const TypedLks& lks, std::size_t bound, const std::function<bool(const Lasso&)>& visit) {
  std::size_t count = 0;
  std::vector<StateId> states;
  std::vector<EventId> events;
  bool stop = false;

  std::function<void(std::size_t)> grow = [&](std::size_t length) {
    const std::size_t k = states.size() - 1;
    if (k + 1 == length) {
      for (std::size_t l = k + 1; l-- > 0 && !stop;) {
        const auto* label = lks.events_between(states[k], states[l]);
        if (!label) continue;
        for (EventId a : *label) {
          Lasso pi{states, events, l};
          pi.events.push_back(a);
          ++count;
          if (!visit(pi)) {
            stop = true;
            return;
          }
        }
      }
      return;
    }
    for (const Edge& edge : lks.successors(states[k])) {
      for (EventId a : edge.events) {
        states.push_back(edge.target);
        events.push_back(a);
        grow(length);
        states.pop_back();
        events.pop_back();
        if (stop) return;
      }
    }
  };

  for (std::size_t length = 1; length <= bound && !stop; ++length) {
    for (StateId s0 : lks.initial()) {
      states.assign(1, s0);
      events.clear();
      grow(length);
      if (stop) break;
    }
  }
  return count;
}

CheckResult oracle_find(const TypedLks& lks, const BoundFormula& phi, std::size_t bound, std::size_t max_lassos) {
  require_checkable(lks, bound);
  auto start = std::chrono::steady_clock::now();
  CheckResult result;
  result.bound = bound;
  bool capped = false;
  result.stats.lassos_checked = for_each_lasso(lks, bound, [&](const Lasso& pi) {
    if (result.stats.lassos_checked++ >= max_lassos) {
      capped = true;
      return false;
    }
    if (!eval_lasso(lks, phi, pi)) {
      result.counterexample = pi;
      return false;
    }
    return true;
  });
  if (capped) throw ResourceCapExceeded("oracle enumeration exceeded " + std::to_string(max_lassos) + " lassos");
  result.stats.query_ms = elapsed_ms(start);
  return result;
}

}  // namespace cexplore
