#pragma once

// Shared test helpers: the example models built in code, random model
// generators, and brute-force oracles that share no code with the solvers.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qsp/model.hpp"
#include "qsp/verifier.hpp"

namespace qsp::test {

Rational q(const char* text);

// models
WeightedMdp commuting();    // employee MDP: home, waiting room, train, traffic states, work
WeightedMdp bus_taxi();     // two-dimensional (time, cost) commuting MDP
WeightedGame lawnmower();   // three-dimensional (battery, fuel, time) game
WeightedGame shortest_path_graph();  // adversary-free shortest-path graph A..E
TargetSet targets(const WeightedMdp& mdp, std::vector<std::string> names);
TargetSet targets(const WeightedGame& game, std::vector<std::string> names);

// strategies
MooreStrategy car_strategy();
MooreStrategy bike_strategy();
MooreStrategy train_wait_strategy();
MooreStrategy bwc_wait_strategy();
MooreStrategy bus_once_then_taxi();
MooreStrategy coin_strategy();
MooreStrategy lawnmower_controller();
MooreStrategy lawnmower_fast_mow();

/// Path of a checked-in fixture file.
std::string fixture(const std::string& name);

// random models
struct MdpShape {
  std::size_t max_states = 6;
  std::size_t max_actions = 2;
  std::int64_t max_weight = 5;
  int denominator = 4;  // probabilities are multiples of 1/denominator
};
/// States s0..s(n-1), initial s0, target s(n-1) (with a self-loop), weights in 1..max_weight.
WeightedMdp random_mdp(std::mt19937_64& rng, const MdpShape& shape);
TargetSet last_state(const WeightedMdp& mdp);

/// Game with 2..max_nodes states, random owners, 1..3 edges per state,
/// weights in [-max_abs, max_abs] on `dims` dimensions, plus a random pure
/// memoryless player-1 strategy.
struct RandomArena {
  WeightedGame game;
  MooreStrategy strategy;
};
RandomArena random_arena(std::mt19937_64& rng, std::size_t max_nodes, std::int64_t max_abs, std::size_t dims);

namespace oracle {

using Policy = std::vector<std::size_t>;  // per state: index into actions_at(state)

/// Every pure memoryless policy of the MDP.
std::vector<Policy> all_policies(const WeightedMdp& mdp);
MooreStrategy to_strategy(const WeightedMdp& mdp, const Policy& policy);

/// Expected truncated sum of a memoryless policy, by a dense elimination
/// written independently of the library; nullopt for infinity.
std::optional<Rational> policy_expectation(const WeightedMdp& mdp, const TargetSet& target, std::size_t dim,
                                           const Policy& policy);
/// Worst case over the policy's support graph; nullopt for infinity.
std::optional<std::int64_t> policy_worst_case(const WeightedMdp& mdp, const TargetSet& target, std::size_t dim,
                                              const Policy& policy);

std::optional<Rational> min_expectation(const WeightedMdp& mdp, const TargetSet& target, std::size_t dim);
std::optional<std::int64_t> min_worst_case(const WeightedMdp& mdp, const TargetSet& target, std::size_t dim);

/// max over history-dependent strategies of P[TS <= bound], by memoised recursion over (state, spent).
Rational max_probability(const WeightedMdp& mdp, const TargetSet& target, std::size_t dim, std::int64_t bound);

/// Same maximum, by enumerating every deterministic (state, spent) policy;
/// nullopt when there are more than `limit` of them.
std::optional<Rational> max_probability_enumerated(const WeightedMdp& mdp, const TargetSet& target, std::size_t dim,
                                                   std::int64_t bound, std::size_t limit);

/// min expectation among strategies whose every run has TS <= bound, by
/// recursion over (state, spent); nullopt when no such strategy exists.
std::optional<Rational> min_safe_expectation(const WeightedMdp& mdp, const TargetSet& target, std::size_t dim,
                                             std::int64_t bound);

/// Classical Dijkstra on a game read as a plain graph.
std::vector<std::optional<std::int64_t>> dijkstra(const WeightedGame& game, const TargetSet& target, std::size_t dim);

/// Elementary cycles of a product graph.
std::vector<Walk> simple_cycles(const ProductGraph& product);
Rational walk_sum(const ProductGraph& product, const Walk& walk, std::size_t dim);
/// Max mean over elementary cycles.
Rational max_cycle_mean(const ProductGraph& product, std::size_t dim);
/// Minimal initial credit, or nullopt if some cycle is negative.
std::optional<std::int64_t> energy_credit(const ProductGraph& product, std::size_t dim);
/// Whether every cycle visits an accepting state.
bool buchi_holds(const ProductGraph& product, const TargetSet& accepting);

}  // namespace oracle

}  // namespace qsp::test
