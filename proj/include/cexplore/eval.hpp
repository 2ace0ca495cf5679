#pragma once

#include <vector>

#include "cexplore/formula.hpp"
#include "cexplore/lks.hpp"

namespace cexplore {

// Truth value of f at every stored position of pi (the suffix of the
// infinite unrolling starting there). Fixpoints for U, R, F and G are
// computed on the lasso's successor graph.
std::vector<bool> eval_positions(const TypedLks& lks, const BoundFormula& f, const Lasso& pi);

// pi |= f under SE-LTL semantics: an event atom holds iff it is the first
// event of the path, a type atom iff the first event has that type.
bool eval_lasso(const TypedLks& lks, const BoundFormula& f, const Lasso& pi);

}  // namespace cexplore
