#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <stdexcept>
#include <variant>
#include <vector>

#include "cexplore/checker.hpp"
#include "cexplore/formula.hpp"
#include "cexplore/lks.hpp"

namespace cexplore {

enum class Mode { counterexample, witness };

const char* to_string(Mode mode);

// Phi: index -> formula, true everywhere except at the stored indices.
class RestrictionMap {
 public:
  BoundFormula at(std::size_t i) const;
  void set(std::size_t i, BoundFormula f);
  // Phi (+) {i+1..} -> true.
  void reset_after(std::size_t i);

  const std::map<std::size_t, BoundFormula>& entries() const { return entries_; }
  friend bool operator==(const RestrictionMap&, const RestrictionMap&) = default;

 private:
  std::map<std::size_t, BoundFormula> entries_;
};

// (phi, pi, i, Phi) plus the search bound and mode. In witness mode `phi`
// is already the negated constraint, so pi is always a counter-example of
// `phi`. `focus` is unbounded; positions past the stored lasso are read
// from its unrolling.
struct ExplorationState {
  BoundFormula phi;
  Lasso pi;
  std::size_t focus = 0;
  RestrictionMap restrictions;
  std::size_t bound = 0;
  Mode mode = Mode::counterexample;

  friend bool operator==(const ExplorationState&, const ExplorationState&) = default;
};

struct PropertyHolds {
  std::size_t bound;
  CheckStats stats;
};

struct BoundaryError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

enum class OpStatus { ok, no_alternative };

struct OpResult {
  OpStatus status = OpStatus::ok;
  double query_ms = 0;
};

struct TypeAvailability {
  TypeId type;
  bool enabled = false;
  double query_ms = 0;
};

// Process-wide cap on concurrently running checker queries.
using QueryLimiter = std::counting_semaphore<>;

struct ExplorerOptions {
  std::size_t jobs = 1;  // concurrent queries inside one enabled_types call
  // Variant: also conjoin Phi(i) into the type-switch query.
  bool strict_type_switch = false;
  QueryLimiter* limiter = nullptr;
};

// encode_prefix(pi, i) for growing i, extended incrementally. Copies get
// their own lock.
class PrefixCache {
 public:
  PrefixCache() = default;
  PrefixCache(const PrefixCache& other);
  PrefixCache& operator=(const PrefixCache& other);

  BoundFormula get(const TypedLks& lks, const Lasso& pi, std::size_t i) const;
  void clear();

 private:
  mutable std::mutex mu_;
  mutable std::vector<BoundFormula> prefixes_;  // prefixes_[i] = [pi]_i
};

class Session {
 public:
  // M(phi) (witness mode: M(!phi)) as the initial state, or PropertyHolds.
  static std::variant<Session, PropertyHolds> start(std::shared_ptr<const TypedLks> lks, const BoundFormula& phi,
                                                    std::size_t bound, Mode mode, ExplorerOptions opts = {});

  const ExplorationState& state() const { return st_; }
  const TypedLks& lks() const { return *lks_; }
  std::shared_ptr<const TypedLks> shared_lks() const { return lks_; }
  const CheckStats& initial_stats() const { return initial_stats_; }
  // Bumped exactly when pi, i or Phi changes.
  std::uint64_t revision() const { return revision_; }

  // State and event at the focus (read from the unrolling).
  Step focused() const { return unroll(st_.pi, st_.focus); }

  void forward();
  // Throws BoundaryError at i = 0.
  void backward();

  // On NoAlternative the session is left unchanged.
  OpResult alt_state();
  OpResult alt_event();
  OpResult set_type(TypeId t);

  // Dry run of set_type for every type, without changing the session.
  // Results are in type id order; `on_result` is called as each query
  // finishes (from worker threads, serialised).
  std::vector<TypeAvailability> enabled_types(
      const std::function<void(const TypeAvailability&)>& on_result = {}) const;

  // The queries themselves, exposed for inspection.
  BoundFormula alt_state_query() const;
  BoundFormula alt_event_query() const;
  BoundFormula set_type_query(TypeId t) const;

 private:
  Session(std::shared_ptr<const TypedLks> lks, ExplorationState st, ExplorerOptions opts, CheckStats stats);

  CheckResult run(const BoundFormula& query) const;
  BoundFormula prefix() const { return prefixes_.get(*lks_, st_.pi, st_.focus); }
  BoundFormula type_query(const BoundFormula& prefix, const BoundFormula& state, TypeId t) const;
  OpResult commit(const BoundFormula& query, std::optional<BoundFormula> restriction);

  std::shared_ptr<const TypedLks> lks_;
  ExplorationState st_;
  ExplorerOptions opts_;
  CheckStats initial_stats_;
  std::uint64_t revision_ = 0;
  PrefixCache prefixes_;
};

}  // namespace cexplore
