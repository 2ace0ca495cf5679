#pragma once

#include <cstddef>

#include "cexplore/formula.hpp"
#include "cexplore/lks.hpp"

namespace cexplore {

// [s]: conjunction over all propositions in id order, positive for those in
// L(s) and negated for the rest. True when the model has no propositions.
BoundFormula encode_state(const TypedLks& lks, StateId s);

// X^i f.
BoundFormula nest_next(BoundFormula f, std::size_t i);

// [pi]_i = ([s_0] && a_0) && X([s_1] && a_1) && ... && X^{i-1}([s_{i-1}] && a_{i-1}),
// left-folded in position order; true for i = 0. Positions past the stored
// lasso are read from its unrolling.
BoundFormula encode_prefix(const TypedLks& lks, const Lasso& pi, std::size_t i);

// The event atom a, bound to the model.
BoundFormula encode_event(const TypedLks& lks, EventId e);
BoundFormula encode_type(const TypedLks& lks, TypeId t);

}  // namespace cexplore
