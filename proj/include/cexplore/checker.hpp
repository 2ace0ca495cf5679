#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>

#include "cexplore/formula.hpp"
#include "cexplore/lks.hpp"

namespace cexplore {

struct CheckStats {
  double query_ms = 0;
  std::size_t states_visited = 0;     // search-tree nodes expanded
  std::size_t automaton_states = 0;
  std::size_t product_states = 0;
  std::size_t lassos_checked = 0;
};

// Valid(bound) when `counterexample` is empty, else CounterExample(lasso).
struct CheckResult {
  std::optional<Lasso> counterexample;
  std::size_t bound = 0;
  CheckStats stats;

  bool valid() const { return !counterexample; }
};

struct ResourceCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Candidate order shared by the checker and the oracle. Lassos are tried by
// increasing length; within one length, paths grow depth first from initial
// states in id order, expanding edges by successor id then event id; the
// closing edge of a path is tried by decreasing loop start, then event id.
// "The first counter-example" means the first refuting lasso in this order.
//
// Returns the first lasso of length <= bound refuting phi. The search runs
// over the product of lks with the automaton of !phi: a search branch is cut
// as soon as no automaton run survives on it, or none of the surviving
// product states can reach an accepting cycle at all. Each closed lasso is
// accepted iff its product with the automaton has an accepting cycle, found
// by nested depth-first search.
//
// Throws std::invalid_argument for bound 0 or a malformed lks.
CheckResult find_counterexample(const TypedLks& lks, const BoundFormula& phi, std::size_t bound);

// Brute-force oracle: enumerates every lasso of length <= bound in the same
// order and evaluates phi directly. Throws ResourceCapExceeded after
// `max_lassos` candidates.
CheckResult oracle_find(const TypedLks& lks, const BoundFormula& phi, std::size_t bound,
                        std::size_t max_lassos = 20'000'000);

// Enumerates every lasso of lks of length <= bound in the candidate order;
// stops early when `visit` returns false. Returns the number visited.
std::size_t for_each_lasso(const TypedLks& lks, std::size_t bound, const std::function<bool(const Lasso&)>& visit);

}  // namespace cexplore
