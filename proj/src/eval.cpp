#include "cexplore/eval.hpp"

#include <stdexcept>

namespace cexplore {

namespace {

using Values = std::vector<char>;

class LassoEvaluator {
 public:
  LassoEvaluator(const TypedLks& lks, const Lasso& pi) : lks_(lks), pi_(pi), n_(pi.size()) {
    if (n_ == 0 || pi.events.size() != n_ || pi.loop_start >= n_) throw std::invalid_argument("malformed lasso");
  }

  Values eval(const Formula& f) {
    Values v(n_, 0);
    switch (f.op()) {
      case Op::True: v.assign(n_, 1); break;
      case Op::False: break;
      case Op::Prop:
        for (std::size_t j = 0; j < n_; ++j) v[j] = lks_.holds(pi_.states[j], PropId(f.atom().id));
        break;
      case Op::Event:
        for (std::size_t j = 0; j < n_; ++j) v[j] = pi_.events[j].value == f.atom().id;
        break;
      case Op::Type:
        for (std::size_t j = 0; j < n_; ++j) v[j] = lks_.type_of(pi_.events[j]).value == f.atom().id;
        break;
      case Op::Not: {
        Values a = eval(f.child());
        for (std::size_t j = 0; j < n_; ++j) v[j] = !a[j];
        break;
      }
      case Op::And:
      case Op::Or: {
        Values a = eval(f.lhs());
        Values b = eval(f.rhs());
        for (std::size_t j = 0; j < n_; ++j) v[j] = f.op() == Op::And ? (a[j] && b[j]) : (a[j] || b[j]);
        break;
      }
      case Op::Next: {
        Values a = eval(f.child());
        for (std::size_t j = 0; j < n_; ++j) v[j] = a[pi_.successor(j)];
        break;
      }
      case Op::Finally: {
        Values a = eval(f.child());
        v = least(a, Values(n_, 1));
        break;
      }
      case Op::Globally: {
        Values a = eval(f.child());
        v = greatest(Values(n_, 0), a);
        break;
      }
      case Op::Until: v = least(eval(f.rhs()), eval(f.lhs())); break;
      case Op::Release: v = greatest(eval(f.lhs()), eval(f.rhs())); break;
    }
    return v;
  }

 private:
  // Least solution of v[j] = now[j] || (cont[j] && v[succ j]).
  Values least(const Values& now, const Values& cont) const {
    Values v = now;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t k = n_; k-- > 0;) {
        char nv = now[k] || (cont[k] && v[pi_.successor(k)]);
        if (nv != v[k]) {
          v[k] = nv;
          changed = true;
        }
      }
    }
    return v;
  }

  // Greatest solution of v[j] = hold[j] && (stop[j] || v[succ j]).
  Values greatest(const Values& stop, const Values& hold) const {
    Values v = hold;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t k = n_; k-- > 0;) {
        char nv = hold[k] && (stop[k] || v[pi_.successor(k)]);
        if (nv != v[k]) {
          v[k] = nv;
          changed = true;
        }
      }
    }
    return v;
  }

  const TypedLks& lks_;
  const Lasso& pi_;
  std::size_t n_;
};

}  // namespace

std::vector<bool> eval_positions(const TypedLks& lks, const BoundFormula& f, const Lasso& pi) {
  LassoEvaluator ev(lks, pi);
  Values v = ev.eval(f.formula());
  return {v.begin(), v.end()};
}

bool eval_lasso(const TypedLks& lks, const BoundFormula& f, const Lasso& pi) {
  LassoEvaluator ev(lks, pi);
  return ev.eval(f.formula())[0] != 0;
}

}  // namespace cexplore
