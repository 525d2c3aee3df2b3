#pragma once

// Verification of a pure finite-memory player-1 strategy in a weighted game
// against energy, mean-payoff and Büchi objectives, for every adversary.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsp/model.hpp"

namespace qsp {

struct ProductNode {
  StateIndex state;
  MemoryIndex memory;
};

/// One move of the product: game edge `edge` from node `from` to node `to`.
struct ProductStep {
  std::size_t from;
  std::size_t to;
  std::size_t edge;
};

class ProductGraph {
 public:
  std::size_t size() const { return nodes_.size(); }
  std::size_t initial() const { return 0; }
  const ProductNode& node(std::size_t n) const { return nodes_.at(n); }
  const std::vector<ProductStep>& out(std::size_t n) const { return out_.at(n); }
  const WeightedGame& game() const { return *game_; }
  Weight weight(const ProductStep& step, std::size_t dimension) const {
    return game_->edge(step.edge).weight.at(dimension);
  }

 private:
  friend ProductGraph build_product(const WeightedGame& game, const MooreStrategy& strategy);

  const WeightedGame* game_ = nullptr;
  std::vector<ProductNode> nodes_;
  std::vector<std::vector<ProductStep>> out_;
};

/// Reachable product from (initial state, initial memory): the strategy's edge
/// at player-1 nodes, every edge at player-2 nodes. Throws StrategyError for
/// randomized or incomplete strategies.
ProductGraph build_product(const WeightedGame& game, const MooreStrategy& strategy);

/// A sequence of product steps; for cycles the last step returns to the first node.
using Walk = std::vector<ProductStep>;

struct EnergyResult {
  std::size_t dimension;
  std::optional<std::int64_t> credit;  // nullopt: no finite initial credit suffices
  Walk witness;                        // negative cycle, or a path to the lowest prefix sum
};

std::vector<EnergyResult> check_energy(const ProductGraph& product, std::span<const std::size_t> dimensions);

struct BuchiResult {
  bool holds;
  Walk witness;  // a reachable cycle avoiding every accepting node when !holds
};

BuchiResult check_buchi(const ProductGraph& product, const TargetSet& accepting);

struct MeanPayoffResult {
  bool holds;
  Rational max_mean;
  Walk witness;  // a cycle attaining max_mean
};

/// Maximum mean cycle (Karp) over the product; holds iff it is below the
/// threshold (strict) or at most the threshold.
MeanPayoffResult check_meanpayoff(const ProductGraph& product, std::size_t dimension, const Rational& threshold,
                                  bool strict);

/// Maximum cycle mean by Karp's recurrence, plus a witness cycle.
std::pair<Rational, Walk> max_mean_cycle(const ProductGraph& product, std::size_t dimension);

struct MeanPayoffObjective {
  std::size_t dimension;
  Rational threshold;
  bool strict = true;
};

struct ObjectiveSpec {
  std::vector<std::size_t> energy_dimensions;
  std::optional<MeanPayoffObjective> meanpayoff;
  std::optional<TargetSet> buchi;
};

struct VerificationReport {
  bool passed;
  std::size_t product_nodes;
  std::vector<EnergyResult> energy;  // credits are reported; energy never fails with finite credit
  std::optional<BuchiResult> buchi;
  std::optional<MeanPayoffResult> meanpayoff;
};

/// Throws QueryError when no objective is given or a dimension is invalid.
VerificationReport verify(const WeightedGame& game, const MooreStrategy& strategy, const ObjectiveSpec& objectives);

/// "s0 -[e]-> s1 -[e']-> ..." rendering of a walk with memory annotations.
std::string describe(const ProductGraph& product, const Walk& walk, const MooreStrategy& strategy);

}  // namespace qsp
