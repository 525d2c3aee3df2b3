#pragma once

// Budget unfolding of an MDP: nodes (state, spent) with spent in 0..bound, plus
// absorbing SUCCESS (first target visit within budget) and FAIL (budget
// exceeded). Positive weights make it a DAG ordered by spent.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "qsp/model.hpp"

namespace qsp {

struct UnfoldedNode {
  enum class Kind { running, success, fail };
  Kind kind;
  StateIndex state = 0;
  std::int64_t spent = 0;

  friend bool operator==(const UnfoldedNode&, const UnfoldedNode&) = default;
};

class BudgetUnfolding {
 public:
  /// Requires strictly positive weights on `dimension` (checked by callers).
  BudgetUnfolding(const WeightedMdp& mdp, const TargetSet& target, std::size_t dimension, std::int64_t bound);

  const WeightedMdp& mdp() const { return *mdp_; }
  std::int64_t bound() const { return bound_; }
  UnfoldedNode root() const;

  /// Node reached from a running node by `action` when the outcome is `target`.
  UnfoldedNode successor(const UnfoldedNode& node, std::size_t action, StateIndex target) const;

  /// Successors of a running node under an action, merged per node.
  std::vector<std::pair<UnfoldedNode, Rational>> step(const UnfoldedNode& node, std::size_t action) const;

  /// Running nodes reachable from the root under some policy.
  std::size_t reachable_running_nodes() const;

 private:
  const WeightedMdp* mdp_;
  const TargetSet* target_;
  std::size_t dimension_;
  std::int64_t bound_;
};

/// Per-(spent, state) action table of a policy on the unfolding; SIZE_MAX
/// where undefined.
struct BudgetPolicy {
  std::int64_t bound = 0;
  std::vector<std::vector<std::size_t>> action;  // [spent][state]
};

/// Moore machine playing `policy`, with memory "<state>@<spent>" for each
/// running node reachable under it plus "done" once the target is visited or
/// the budget is exceeded. In "done" the lowest-named action is played.
MooreStrategy budget_strategy(const BudgetUnfolding& unfolding, const BudgetPolicy& policy);

}  // namespace qsp
