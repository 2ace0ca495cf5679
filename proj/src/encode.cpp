#include "cexplore/encode.hpp"

#include <optional>
#include <stdexcept>

namespace cexplore {

BoundFormula encode_state(const TypedLks& lks, StateId s) {
  if (s.index() >= lks.num_states()) throw std::out_of_range("unknown state s" + std::to_string(s.value));
  std::optional<BoundFormula> acc;
  for (std::size_t p = 0; p < lks.num_props(); ++p) {
    PropId id(p);
    BoundFormula lit = BoundFormula::prop(lks, id);
    if (!lks.holds(s, id)) lit = !lit;
    acc = acc ? (*acc && lit) : lit;
  }
  return acc.value_or(BoundFormula::top());
}

BoundFormula nest_next(BoundFormula f, std::size_t i) {
  for (std::size_t k = 0; k < i; ++k) f = next(f);
  return f;
}

BoundFormula encode_event(const TypedLks& lks, EventId e) {
  return BoundFormula::event(lks, e);
}

BoundFormula encode_type(const TypedLks& lks, TypeId t) {
  return BoundFormula::type(lks, t);
}

BoundFormula encode_prefix(const TypedLks& lks, const Lasso& pi, std::size_t i) {
  if (i == 0) return BoundFormula::top();
  std::optional<BoundFormula> acc;
  for (std::size_t j = 0; j < i; ++j) {
    Step step = unroll(pi, j);
    BoundFormula here = nest_next(encode_state(lks, step.state) && encode_event(lks, step.event), j);
    acc = acc ? (*acc && here) : here;
  }
  return *acc;
}

}  // namespace cexplore
