#include "qsp/bwc.hpp"

#include <algorithm>

#include "qsp/chain.hpp"
#include "qsp/ssp.hpp"
#include "qsp/unfolding.hpp"

namespace qsp {

BwcSolution solve_bwc(const WeightedMdp& mdp, const TargetSet& target, std::size_t dimension,
                      std::int64_t worst_case_bound, const Rational& expectation_bound) {
  require_positive_weights(mdp, target, dimension);
  if (worst_case_bound < 0) throw QueryError("worst-case bound must be a natural number");
  if (worst_case_bound == 0 && !target.contains(mdp.initial()))
    throw QueryError("worst-case bound 0 cannot be met: the initial state is not a target");

  const auto wc = worstcase_values(mdp, target, dimension);
  BwcSolution solution{BwcVerdict::infeasible_worst_case, wc[mdp.initial()], {}, {}, {}};
  if (wc[mdp.initial()] > ExtendedNatural(worst_case_bound)) return solution;

  const BudgetUnfolding unfolding(mdp, target, dimension, worst_case_bound);
  const auto n = mdp.state_count();
  const auto levels = static_cast<std::size_t>(worst_case_bound) + 1;
  std::vector<std::vector<Rational>> expected(levels, std::vector<Rational>(n));
  std::vector<std::vector<std::int64_t>> longest(levels, std::vector<std::int64_t>(n, 0));
  BudgetPolicy policy{worst_case_bound,
                      std::vector<std::vector<std::size_t>>(levels, std::vector<std::size_t>(n, SIZE_MAX))};

  for (std::size_t spent = levels; spent-- > 0;) {
    for (StateIndex s = 0; s < n; ++s) {
      if (target.contains(s)) continue;
      for (auto a : mdp.actions_at(s)) {
        const auto& action = mdp.action(a);
        const auto after = static_cast<std::int64_t>(spent) + action.weight[dimension];
        const bool safe = std::all_of(action.outcomes.begin(), action.outcomes.end(), [&](const Outcome& o) {
          return wc[o.target].is_finite() && after + wc[o.target].value() <= worst_case_bound;
        });
        if (!safe) continue;
        Rational q = action.weight[dimension];
        std::int64_t worst = 0;
        for (const auto& o : action.outcomes) {
          if (target.contains(o.target)) continue;
          const auto next = static_cast<std::size_t>(after);
          q += o.probability * expected[next][o.target];
          worst = std::max(worst, longest[next][o.target]);
        }
        if (policy.action[spent][s] == SIZE_MAX || q < expected[spent][s]) {
          expected[spent][s] = q;
          longest[spent][s] = action.weight[dimension] + worst;
          policy.action[spent][s] = a;
        }
      }
    }
  }

  const auto root = unfolding.root();
  if (root.kind == UnfoldedNode::Kind::success) {
    solution.expectation = Rational(0);
    solution.certified_worst_case = 0;
  } else {
    solution.expectation = expected[0][root.state];
    solution.certified_worst_case = longest[0][root.state];
  }
  solution.verdict = *solution.expectation <= expectation_bound ? BwcVerdict::yes : BwcVerdict::no;
  solution.strategy = budget_strategy(unfolding, policy);
  return solution;
}

}  // namespace qsp
