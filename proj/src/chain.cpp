#include "qsp/chain.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "qsp/linear.hpp"

namespace qsp {

InducedChain induce_chain(const WeightedMdp& mdp, const MooreStrategy& strategy) {
  InducedChain chain;
  chain.mdp_ = &mdp;
  std::map<std::pair<StateIndex, MemoryIndex>, std::size_t> index;
  auto intern = [&](StateIndex s, MemoryIndex m) {
    auto [it, fresh] = index.try_emplace({s, m}, chain.nodes_.size());
    if (fresh) {
      chain.nodes_.push_back({s, m});
      chain.edges_.emplace_back();
    }
    return it->second;
  };
  intern(mdp.initial(), strategy.initial_memory());

  for (std::size_t n = 0; n < chain.nodes_.size(); ++n) {
    const auto [state, memory] = chain.nodes_[n];
    const auto& name = mdp.state_name(state);
    const auto step = strategy_step(strategy, memory, name);
    std::map<std::pair<std::size_t, std::size_t>, Rational> merged;  // (to, action) -> probability
    for (const auto& [action_name, p] : step.distribution) {
      const Action* action = mdp.find_action(state, action_name);
      if (!action)
        throw StrategyError("strategy chooses '" + action_name + "' at state '" + name +
                            "' where no such action exists");
      const auto action_index = static_cast<std::size_t>(action - mdp.actions().data());
      for (const auto& outcome : action->outcomes) {
        auto next = step.next(action_name, mdp.state_name(outcome.target));
        if (!next)
          throw StrategyError("incomplete strategy: no memory update at (" + strategy.memory_name(memory) + ", " +
                              mdp.state_name(outcome.target) + ") after '" + action_name + "'");
        auto to = intern(outcome.target, *next);
        merged[{to, action_index}] += p * outcome.probability;
      }
    }
    for (auto& [key, p] : merged) chain.edges_[n].push_back({key.first, p, key.second});
  }
  return chain;
}

namespace {

bool is_target(const InducedChain& chain, const TargetSet& target, std::size_t n) {
  return target.contains(chain.node(n).state);
}

/// Nodes reachable from the initial node without passing through a target
/// node (target nodes themselves are included as leaves).
std::vector<bool> reachable_before_target(const InducedChain& chain, const TargetSet& target) {
  std::vector<bool> seen(chain.size(), false);
  std::deque<std::size_t> queue{chain.initial()};
  seen[chain.initial()] = true;
  while (!queue.empty()) {
    auto n = queue.front();
    queue.pop_front();
    if (is_target(chain, target, n)) continue;
    for (const auto& e : chain.edges(n))
      if (!seen[e.to]) {
        seen[e.to] = true;
        queue.push_back(e.to);
      }
  }
  return seen;
}

/// Nodes from which some target node is reachable in the transition graph.
std::vector<bool> can_reach_target(const InducedChain& chain, const TargetSet& target) {
  std::vector<std::vector<std::size_t>> reverse(chain.size());
  for (std::size_t n = 0; n < chain.size(); ++n)
    for (const auto& e : chain.edges(n)) reverse[e.to].push_back(n);
  std::vector<bool> good(chain.size(), false);
  std::deque<std::size_t> queue;
  for (std::size_t n = 0; n < chain.size(); ++n)
    if (is_target(chain, target, n)) {
      good[n] = true;
      queue.push_back(n);
    }
  while (!queue.empty()) {
    auto n = queue.front();
    queue.pop_front();
    for (auto p : reverse[n])
      if (!good[p] && !is_target(chain, target, p)) {
        good[p] = true;
        queue.push_back(p);
      }
  }
  return good;
}

void check_universe(const InducedChain& chain, const TargetSet& target) {
  if (target.universe_size() != chain.mdp().state_count())
    throw QueryError("target set does not match the model's state space");
}

}  // namespace

void require_positive_weights(const InducedChain& chain, const TargetSet& target, std::size_t dimension) {
  check_universe(chain, target);
  if (dimension >= chain.mdp().dimensions())
    throw QueryError("dimension index " + std::to_string(dimension) + " out of range");
  for (std::size_t n = 0; n < chain.size(); ++n) {
    if (is_target(chain, target, n)) continue;
    for (const auto& e : chain.edges(n))
      if (chain.weight(e, dimension) <= 0) {
        const auto& a = chain.mdp().action(e.action);
        throw QueryError("action '" + a.name + "' at '" + chain.mdp().state_name(a.source) +
                         "' has non-positive weight on dimension '" + chain.mdp().dimension_names()[dimension] + "'");
      }
  }
}

void require_positive_weights(const WeightedMdp& mdp, const TargetSet& target, std::size_t dimension) {
  if (target.universe_size() != mdp.state_count())
    throw QueryError("target set does not match the model's state space");
  if (dimension >= mdp.dimensions()) throw QueryError("dimension index " + std::to_string(dimension) + " out of range");
  for (const auto& a : mdp.actions())
    if (!target.contains(a.source) && a.weight[dimension] <= 0)
      throw QueryError("action '" + a.name + "' at '" + mdp.state_name(a.source) +
                       "' has non-positive weight on dimension '" + mdp.dimension_names()[dimension] + "'");
}

Rational reach_probability(const InducedChain& chain, const TargetSet& target) {
  check_universe(chain, target);
  if (is_target(chain, target, chain.initial())) return 1;
  const auto relevant = reachable_before_target(chain, target);
  const auto good = can_reach_target(chain, target);
  if (!good[chain.initial()]) return 0;

  // unknowns: relevant, non-target nodes that can reach the target
  std::vector<std::size_t> slot(chain.size(), SIZE_MAX);
  std::vector<std::size_t> unknowns;
  for (std::size_t n = 0; n < chain.size(); ++n)
    if (relevant[n] && good[n] && !is_target(chain, target, n)) {
      slot[n] = unknowns.size();
      unknowns.push_back(n);
    }
  RationalMatrix a(unknowns.size(), std::vector<Rational>(unknowns.size()));
  std::vector<Rational> b(unknowns.size());
  for (std::size_t i = 0; i < unknowns.size(); ++i) {
    a[i][i] += 1;
    for (const auto& e : chain.edges(unknowns[i])) {
      if (is_target(chain, target, e.to))
        b[i] += e.probability;
      else if (slot[e.to] != SIZE_MAX)
        a[i][slot[e.to]] -= e.probability;
    }
  }
  return solve_linear(std::move(a), std::move(b))[slot[chain.initial()]];
}

ExtendedRational expected_truncated_sum(const InducedChain& chain, const TargetSet& target, std::size_t dimension) {
  require_positive_weights(chain, target, dimension);
  if (is_target(chain, target, chain.initial())) return Rational(0);
  const auto relevant = reachable_before_target(chain, target);
  const auto good = can_reach_target(chain, target);
  for (std::size_t n = 0; n < chain.size(); ++n)
    if (relevant[n] && !good[n]) return ExtendedRational::infinite();

  std::vector<std::size_t> slot(chain.size(), SIZE_MAX);
  std::vector<std::size_t> unknowns;
  for (std::size_t n = 0; n < chain.size(); ++n)
    if (relevant[n] && !is_target(chain, target, n)) {
      slot[n] = unknowns.size();
      unknowns.push_back(n);
    }
  RationalMatrix a(unknowns.size(), std::vector<Rational>(unknowns.size()));
  std::vector<Rational> b(unknowns.size());
  for (std::size_t i = 0; i < unknowns.size(); ++i) {
    a[i][i] += 1;
    for (const auto& e : chain.edges(unknowns[i])) {
      b[i] += e.probability * chain.weight(e, dimension);
      if (!is_target(chain, target, e.to)) a[i][slot[e.to]] -= e.probability;
    }
  }
  return solve_linear(std::move(a), std::move(b))[slot[chain.initial()]];
}

Rational prob_ts_leq(const InducedChain& chain, const TargetSet& target, std::size_t dimension, std::int64_t bound) {
  require_positive_weights(chain, target, dimension);
  if (bound < 0) return 0;
  if (is_target(chain, target, chain.initial())) return 1;

  // Forward propagation of probability mass over (node, spent); weights are
  // >= 1 so every step moves to a strictly larger spent level.
  std::vector<std::map<std::size_t, Rational>> level(static_cast<std::size_t>(bound) + 1);
  level[0][chain.initial()] = 1;
  Rational success = 0;
  for (std::size_t spent = 0; spent < level.size(); ++spent) {
    for (const auto& [n, mass] : level[spent]) {
      if (is_target(chain, target, n)) {
        success += mass;
        continue;
      }
      for (const auto& e : chain.edges(n)) {
        const auto next = spent + static_cast<std::size_t>(chain.weight(e, dimension));
        if (next < level.size()) level[next][e.to] += mass * e.probability;
      }
    }
    level[spent].clear();
  }
  return success;
}

ExtendedNatural worst_case_truncated_sum(const InducedChain& chain, const TargetSet& target, std::size_t dimension) {
  require_positive_weights(chain, target, dimension);
  if (is_target(chain, target, chain.initial())) return std::int64_t{0};
  const auto relevant = reachable_before_target(chain, target);
  const auto good = can_reach_target(chain, target);
  for (std::size_t n = 0; n < chain.size(); ++n)
    if (relevant[n] && !good[n]) return ExtendedNatural::infinite();

  // longest path over the relevant subgraph; a cycle means unbounded sums
  enum class Mark { fresh, active, done };
  std::vector<Mark> mark(chain.size(), Mark::fresh);
  std::vector<std::int64_t> longest(chain.size(), 0);
  struct Frame {
    std::size_t node;
    std::size_t next_edge;
  };
  std::vector<Frame> stack{{chain.initial(), 0}};
  mark[chain.initial()] = Mark::active;
  while (!stack.empty()) {
    auto& frame = stack.back();
    const auto& out = chain.edges(frame.node);
    if (frame.next_edge == out.size()) {
      mark[frame.node] = Mark::done;
      std::int64_t best = 0;
      for (const auto& e : out)
        best = std::max(best, chain.weight(e, dimension) + (is_target(chain, target, e.to) ? 0 : longest[e.to]));
      longest[frame.node] = best;
      stack.pop_back();
      continue;
    }
    const auto& e = out[frame.next_edge++];
    if (is_target(chain, target, e.to)) continue;
    if (mark[e.to] == Mark::active) return ExtendedNatural::infinite();
    if (mark[e.to] == Mark::fresh) {
      mark[e.to] = Mark::active;
      stack.push_back({e.to, 0});
    }
  }
  return longest[chain.initial()];
}

}  // namespace qsp
