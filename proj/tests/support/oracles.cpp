#include "oracles.hpp"

#include "cexplore/eval.hpp"

namespace cexplore::testing {

std::vector<Lasso> all_counterexamples(const TypedLks& lks, const BoundFormula& phi, std::size_t bound) {
  std::vector<Lasso> out;
  for_each_lasso(lks, bound, [&](const Lasso& pi) {
    if (!eval_lasso(lks, phi, pi)) out.push_back(pi);
    return true;
  });
  return out;
}

bool same_valuation(const TypedLks& lks, StateId a, StateId b) {
  auto la = lks.label(a), lb = lks.label(b);
  return std::equal(la.begin(), la.end(), lb.begin(), lb.end());
}

bool same_prefix(const TypedLks& lks, const Lasso& a, const Lasso& b, std::size_t i) {
  for (std::size_t j = 0; j < i; ++j) {
    Step x = unroll(a, j), y = unroll(b, j);
    if (x.event != y.event || !same_valuation(lks, x.state, y.state)) return false;
  }
  return true;
}

std::set<TypeId> brute_force_enabled(const Session& s, const std::vector<Lasso>& counterexamples) {
  const auto& st = s.state();
  const TypedLks& lks = s.lks();
  Step here = s.focused();
  std::set<TypeId> out;
  for (const Lasso& c : counterexamples) {
    if (!same_prefix(lks, st.pi, c, st.focus)) continue;
    Step there = unroll(c, st.focus);
    if (same_valuation(lks, here.state, there.state)) out.insert(lks.type_of(there.event));
  }
  return out;
}

std::set<std::vector<PropId>> brute_force_states_at_focus(const Session& s, const std::vector<Lasso>& counterexamples) {
  const auto& st = s.state();
  std::set<std::vector<PropId>> out;
  for (const Lasso& c : counterexamples) {
    if (!same_prefix(s.lks(), st.pi, c, st.focus)) continue;
    auto label = s.lks().label(unroll(c, st.focus).state);
    out.insert(std::vector<PropId>(label.begin(), label.end()));
  }
  return out;
}

}  // namespace cexplore::testing
