#pragma once

// Markov chains induced by fixing a finite-memory strategy in an MDP, and the
// truncated-sum quantities evaluated on them.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsp/extended.hpp"
#include "qsp/model.hpp"

namespace qsp {

/// Raised when a query's preconditions do not hold (dimension, weights, bounds).
class QueryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ChainNode {
  StateIndex state;
  MemoryIndex memory;
};

struct ChainEdge {
  std::size_t to;
  Rational probability;
  std::size_t action;  // index into the MDP's actions()
};

class InducedChain {
 public:
  std::size_t size() const { return nodes_.size(); }
  const ChainNode& node(std::size_t n) const { return nodes_.at(n); }
  const std::vector<ChainEdge>& edges(std::size_t n) const { return edges_.at(n); }
  std::size_t initial() const { return 0; }
  const WeightedMdp& mdp() const { return *mdp_; }
  Weight weight(const ChainEdge& e, std::size_t dimension) const { return mdp_->action(e.action).weight.at(dimension); }

 private:
  friend InducedChain induce_chain(const WeightedMdp& mdp, const MooreStrategy& strategy);

  const WeightedMdp* mdp_ = nullptr;
  std::vector<ChainNode> nodes_;
  std::vector<std::vector<ChainEdge>> edges_;
};

/// Builds the reachable product of `mdp` and `strategy`, starting from
/// (initial state, initial memory). The chain refers to `mdp`, which must
/// outlive it. Throws StrategyError on a missing choice or update, or on a
/// choice naming an unavailable action.
InducedChain induce_chain(const WeightedMdp& mdp, const MooreStrategy& strategy);

/// Probability that a run eventually visits `target`.
Rational reach_probability(const InducedChain& chain, const TargetSet& target);

/// Expected truncated sum on `dimension` up to the first visit of `target`;
/// infinite iff the target is reached with probability < 1.
ExtendedRational expected_truncated_sum(const InducedChain& chain, const TargetSet& target, std::size_t dimension);

/// Probability that the truncated sum is at most `bound`.
Rational prob_ts_leq(const InducedChain& chain, const TargetSet& target, std::size_t dimension, std::int64_t bound);

/// Largest truncated sum over all runs with positive probability; infinite if
/// some run avoids the target forever.
ExtendedNatural worst_case_truncated_sum(const InducedChain& chain, const TargetSet& target, std::size_t dimension);

/// Throws QueryError unless `dimension` exists and every edge leaving a
/// non-target node of the chain carries a strictly positive weight on it.
void require_positive_weights(const InducedChain& chain, const TargetSet& target, std::size_t dimension);

/// Same check on a model: every action at a non-target state.
void require_positive_weights(const WeightedMdp& mdp, const TargetSet& target, std::size_t dimension);

}  // namespace qsp
