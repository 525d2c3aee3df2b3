#pragma once

// Stochastic shortest path: minimal expected truncated sum, and minimal
// worst-case truncated sum where an adversary resolves every stochastic
// outcome. Both have optimal pure memoryless strategies.

#include <cstddef>
#include <vector>

#include "qsp/chain.hpp"
#include "qsp/extended.hpp"
#include "qsp/model.hpp"

namespace qsp {

struct ExpectationSolution {
  ExtendedRational value;                  // at the initial state
  std::vector<ExtendedRational> state_values;
  MooreStrategy strategy;                  // pure memoryless
};

/// Minimal expected truncated sum, by policy iteration over proper policies
/// with exact linear solves. Ties go to the lexicographically lowest action.
ExpectationSolution solve_expectation(const WeightedMdp& mdp, const TargetSet& target, std::size_t dimension);

struct WorstCaseSolution {
  ExtendedNatural value;
  std::vector<ExtendedNatural> state_values;  // indexed by the input model's states
  MooreStrategy strategy;                     // pure memoryless, player 1
};

/// Game where the adversary resolves each MDP action's outcome: every pair
/// (s, a) becomes a player-2 state entered with a's weight, whose edges lead
/// to the support of a with zero weight.
WeightedGame adversarial_view(const WeightedMdp& mdp);

/// Min-max truncated sum. Player-1 ties go to the lowest edge (or action) name.
WorstCaseSolution solve_worstcase(const WeightedMdp& mdp, const TargetSet& target, std::size_t dimension);
WorstCaseSolution solve_worstcase(const WeightedGame& game, const TargetSet& target, std::size_t dimension);

/// Per-state worst-case values of the adversarial view, indexed by MDP state.
std::vector<ExtendedNatural> worstcase_values(const WeightedMdp& mdp, const TargetSet& target, std::size_t dimension);

}  // namespace qsp
