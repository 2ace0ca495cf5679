#include "cexplore/explorer.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include "cexplore/encode.hpp"

namespace cexplore {

const char* to_string(Mode mode) { return mode == Mode::witness ? "witness" : "counterexample"; }

BoundFormula RestrictionMap::at(std::size_t i) const {
  auto it = entries_.find(i);
  return it == entries_.end() ? BoundFormula::top() : it->second;
}

void RestrictionMap::set(std::size_t i, BoundFormula f) {
  if (f.formula().op() == Op::True) {
    entries_.erase(i);
  } else {
    entries_.insert_or_assign(i, std::move(f));
  }
}

void RestrictionMap::reset_after(std::size_t i) { entries_.erase(entries_.upper_bound(i), entries_.end()); }

namespace {

// a && b, dropping a literal true on the left.
BoundFormula conj(const BoundFormula& a, const BoundFormula& b) {
  if (a.formula().op() == Op::True) return b;
  return a && b;
}

class LimiterSlot {
 public:
  explicit LimiterSlot(QueryLimiter* limiter) : limiter_(limiter) {
    if (limiter_) limiter_->acquire();
  }
  ~LimiterSlot() {
    if (limiter_) limiter_->release();
  }
  LimiterSlot(const LimiterSlot&) = delete;
  LimiterSlot& operator=(const LimiterSlot&) = delete;

 private:
  QueryLimiter* limiter_;
};

}  // namespace

PrefixCache::PrefixCache(const PrefixCache& other) {
  std::lock_guard lock(other.mu_);
  prefixes_ = other.prefixes_;
}

PrefixCache& PrefixCache::operator=(const PrefixCache& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mu_, other.mu_);
  prefixes_ = other.prefixes_;
  return *this;
}

BoundFormula PrefixCache::get(const TypedLks& lks, const Lasso& pi, std::size_t i) const {
  std::lock_guard lock(mu_);
  if (prefixes_.empty()) prefixes_.push_back(BoundFormula::top());
  while (prefixes_.size() <= i) {
    std::size_t j = prefixes_.size() - 1;
    Step step = unroll(pi, j);
    BoundFormula here = nest_next(encode_state(lks, step.state) && encode_event(lks, step.event), j);
    prefixes_.push_back(conj(prefixes_.back(), here));
  }
  return prefixes_[i];
}

void PrefixCache::clear() {
  std::lock_guard lock(mu_);
  prefixes_.clear();
}

Session::Session(std::shared_ptr<const TypedLks> lks, ExplorationState st, ExplorerOptions opts, CheckStats stats)
    : lks_(std::move(lks)), st_(std::move(st)), opts_(opts), initial_stats_(stats) {}

std::variant<Session, PropertyHolds> Session::start(std::shared_ptr<const TypedLks> lks, const BoundFormula& phi,
                                                    std::size_t bound, Mode mode, ExplorerOptions opts) {
  BoundFormula checked = mode == Mode::witness ? !phi : phi;
  CheckResult r;
  {
    LimiterSlot slot(opts.limiter);
    r = find_counterexample(*lks, checked, bound);
  }
  if (r.valid()) return PropertyHolds{bound, r.stats};
  ExplorationState st{checked, *r.counterexample, 0, RestrictionMap{}, bound, mode};
  return Session(std::move(lks), std::move(st), opts, r.stats);
}

void Session::forward() {
  ++st_.focus;
  ++revision_;
}

void Session::backward() {
  if (st_.focus == 0) throw BoundaryError("already at the first state");
  --st_.focus;
  ++revision_;
}

CheckResult Session::run(const BoundFormula& query) const {
  LimiterSlot slot(opts_.limiter);
  return find_counterexample(*lks_, query, st_.bound);
}

// phi || !([pi]_i && X^i(body))
BoundFormula Session::alt_state_query() const {
  const std::size_t i = st_.focus;
  Step here = focused();
  BoundFormula body = conj(st_.restrictions.at(i), !encode_state(*lks_, here.state));
  return core_or(st_.phi, !conj(prefix(), nest_next(body, i)));
}

BoundFormula Session::alt_event_query() const {
  const std::size_t i = st_.focus;
  Step here = focused();
  BoundFormula body = conj(st_.restrictions.at(i), encode_state(*lks_, here.state)) &&
                      !encode_event(*lks_, here.event) && encode_type(*lks_, lks_->type_of(here.event));
  return core_or(st_.phi, !conj(prefix(), nest_next(body, i)));
}

BoundFormula Session::set_type_query(TypeId t) const {
  return type_query(prefix(), encode_state(*lks_, focused().state), t);
}

BoundFormula Session::type_query(const BoundFormula& prefix, const BoundFormula& state, TypeId t) const {
  if (t.index() >= lks_->num_types()) throw std::out_of_range("unknown event type");
  const std::size_t i = st_.focus;
  BoundFormula body = (opts_.strict_type_switch ? conj(st_.restrictions.at(i), state) : state) && encode_type(*lks_, t);
  return core_or(st_.phi, !conj(prefix, nest_next(body, i)));
}

OpResult Session::commit(const BoundFormula& query, std::optional<BoundFormula> restriction) {
  CheckResult r = run(query);
  OpResult out{OpStatus::ok, r.stats.query_ms};
  if (r.valid()) {
    out.status = OpStatus::no_alternative;
    return out;
  }
  ExplorationState next = st_;
  next.pi = *r.counterexample;
  if (restriction) next.restrictions.set(st_.focus, *restriction);
  next.restrictions.reset_after(st_.focus);
  if (!(next == st_)) {
    if (!(next.pi == st_.pi)) prefixes_.clear();
    st_ = std::move(next);
    ++revision_;
  }
  return out;
}

OpResult Session::alt_state() {
  Step here = focused();
  BoundFormula excluded = conj(st_.restrictions.at(st_.focus), !encode_state(*lks_, here.state));
  return commit(alt_state_query(), excluded);
}

OpResult Session::alt_event() {
  Step here = focused();
  BoundFormula taken = encode_state(*lks_, here.state) && encode_event(*lks_, here.event);
  BoundFormula excluded = conj(st_.restrictions.at(st_.focus), !taken);
  return commit(alt_event_query(), excluded);
}

OpResult Session::set_type(TypeId t) { return commit(set_type_query(t), std::nullopt); }

std::vector<TypeAvailability> Session::enabled_types(const std::function<void(const TypeAvailability&)>& on_result) const {
  const std::size_t n = lks_->num_types();
  std::vector<TypeAvailability> results(n);
  std::atomic<std::size_t> next{0};
  std::mutex report;
  std::exception_ptr failure;
  // Shared by every type's query.
  const BoundFormula shared_prefix = prefix();
  const BoundFormula state = encode_state(*lks_, focused().state);

  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < n;) {
      try {
        CheckResult r = run(type_query(shared_prefix, state, TypeId(t)));
        TypeAvailability a{TypeId(t), !r.valid(), r.stats.query_ms};
        std::lock_guard lock(report);
        results[t] = a;
        if (on_result) on_result(a);
      } catch (...) {
        std::lock_guard lock(report);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  std::size_t extra = std::min(opts_.jobs, n);
  extra = extra > 0 ? extra - 1 : 0;
  {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < extra; ++k) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace cexplore
