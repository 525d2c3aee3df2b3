#pragma once

// Multi-constraint percentile queries: find a (randomized, finite-memory)
// strategy meeting several constraints P[TS_i <= l_i] >= alpha_i at once,
// each over its own target set and weight dimension.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "qsp/model.hpp"
#include "qsp/simplex.hpp"

namespace qsp {

struct PercentileConstraint {
  TargetSet target;
  std::size_t dimension;
  std::int64_t bound;
  Rational alpha;
};

/// Product of the MDP with one status per constraint: running with the
/// accumulated cost, satisfied, or failed.
class MultiUnfolding {
 public:
  static constexpr std::int64_t satisfied = -1;
  static constexpr std::int64_t failed = -2;

  struct Node {
    StateIndex state;
    std::vector<std::int64_t> status;  // cost >= 0 while running
    auto operator<=>(const Node&) const = default;
  };

  MultiUnfolding(const WeightedMdp& mdp, std::span<const PercentileConstraint> constraints);

  const WeightedMdp& mdp() const { return *mdp_; }
  Node root() const;
  Node successor(const Node& node, std::size_t action, StateIndex target) const;
  bool resolved(const Node& node) const;

  /// Non-resolved nodes reachable from the root under some policy, root first.
  const std::vector<Node>& running_nodes() const { return running_; }
  std::optional<std::size_t> find(const Node& node) const;

 private:
  const WeightedMdp* mdp_;
  std::span<const PercentileConstraint> constraints_;
  std::vector<Node> running_;
  std::map<Node, std::size_t> index_;
};

/// Occupation-measure program: one variable per (running node, action),
/// flow conservation per running node, one threshold row per constraint, and
/// the sum of all satisfaction probabilities as the objective to maximize.
struct OccupationLP {
  LinearProgram program;
  std::vector<std::pair<std::size_t, std::size_t>> variables;  // (running node, action)
};

OccupationLP build_occupation_lp(const MultiUnfolding& unfolding, std::span<const PercentileConstraint> constraints);

struct MultiPercentileSolution {
  bool satisfied;
  std::optional<MooreStrategy> strategy;  // present when satisfied
  std::vector<Rational> achieved;         // per constraint, under `strategy`
};

/// Throws QueryError on an empty constraint list, an invalid dimension, a
/// threshold outside [0, 1] or a non-positive weight.
MultiPercentileSolution solve_multi_percentile(const WeightedMdp& mdp,
                                               std::span<const PercentileConstraint> constraints);

}  // namespace qsp
