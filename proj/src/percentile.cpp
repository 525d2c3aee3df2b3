#include "qsp/percentile.hpp"

#include "qsp/chain.hpp"

namespace qsp {

PercentileSolution solve_percentile(const WeightedMdp& mdp, const TargetSet& target, std::size_t dimension,
                                    std::int64_t bound, const Rational& alpha) {
  require_positive_weights(mdp, target, dimension);
  if (!is_probability(alpha)) throw QueryError("probability threshold " + to_string(alpha) + " outside [0, 1]");
  if (bound < 0) throw QueryError("budget must be a natural number");

  const BudgetUnfolding unfolding(mdp, target, dimension, bound);
  const auto n = mdp.state_count();
  const auto levels = static_cast<std::size_t>(bound) + 1;
  std::vector<std::vector<Rational>> value(levels, std::vector<Rational>(n));
  BudgetPolicy policy{bound, std::vector<std::vector<std::size_t>>(levels, std::vector<std::size_t>(n, SIZE_MAX))};

  auto node_value = [&](const UnfoldedNode& node) -> Rational {
    switch (node.kind) {
      case UnfoldedNode::Kind::success: return 1;
      case UnfoldedNode::Kind::fail: return 0;
      default: return value[static_cast<std::size_t>(node.spent)][node.state];
    }
  };

  for (std::size_t spent = levels; spent-- > 0;) {
    for (StateIndex s = 0; s < n; ++s) {
      if (target.contains(s)) continue;
      const UnfoldedNode here{UnfoldedNode::Kind::running, s, static_cast<std::int64_t>(spent)};
      for (auto a : mdp.actions_at(s)) {
        Rational q = 0;
        for (const auto& [next, p] : unfolding.step(here, a)) q += p * node_value(next);
        if (policy.action[spent][s] == SIZE_MAX || q > value[spent][s]) {
          value[spent][s] = q;
          policy.action[spent][s] = a;
        }
      }
    }
  }

  Rational probability = node_value(unfolding.root());
  const bool satisfied = probability >= alpha;
  return {satisfied, std::move(probability), budget_strategy(unfolding, policy)};
}

}  // namespace qsp
