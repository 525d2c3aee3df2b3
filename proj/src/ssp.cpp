#include "qsp/ssp.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

#include "qsp/linear.hpp"

namespace qsp {

namespace {

// ---------------------------------------------------------------------------
// Expectation

/// States from which the target is reached almost surely under some
/// strategy, and for each the actions whose support stays inside that set.
struct AlmostSureRegion {
  std::vector<bool> member;
  std::vector<std::vector<std::size_t>> allowed;  // action indices, name order
};

AlmostSureRegion almost_sure_region(const WeightedMdp& mdp, const TargetSet& target) {
  const auto n = mdp.state_count();
  AlmostSureRegion region{std::vector<bool>(n, true), std::vector<std::vector<std::size_t>>(n)};
  while (true) {
    for (StateIndex s = 0; s < n; ++s) {
      region.allowed[s].clear();
      for (auto a : mdp.actions_at(s)) {
        const auto& outcomes = mdp.action(a).outcomes;
        if (std::all_of(outcomes.begin(), outcomes.end(), [&](const Outcome& o) { return region.member[o.target]; }))
          region.allowed[s].push_back(a);
      }
    }
    std::vector<bool> good(n, false);
    for (StateIndex s = 0; s < n; ++s) good[s] = target.contains(s) && region.member[s];
    for (bool changed = true; changed;) {
      changed = false;
      for (StateIndex s = 0; s < n; ++s) {
        if (good[s] || !region.member[s]) continue;
        for (auto a : region.allowed[s]) {
          const auto& outcomes = mdp.action(a).outcomes;
          if (std::any_of(outcomes.begin(), outcomes.end(), [&](const Outcome& o) { return good[o.target]; })) {
            good[s] = changed = true;
            break;
          }
        }
      }
    }
    if (good == region.member) return region;
    region.member = std::move(good);
  }
}

/// Solves v = w_policy + P_policy v on the non-target region states.
std::vector<Rational> evaluate_policy(const WeightedMdp& mdp, const TargetSet& target, std::size_t dimension,
                                      const std::vector<bool>& region, const std::vector<std::size_t>& policy) {
  const auto n = mdp.state_count();
  std::vector<std::size_t> slot(n, SIZE_MAX);
  std::vector<StateIndex> unknowns;
  for (StateIndex s = 0; s < n; ++s)
    if (region[s] && !target.contains(s)) {
      slot[s] = unknowns.size();
      unknowns.push_back(s);
    }
  RationalMatrix a(unknowns.size(), std::vector<Rational>(unknowns.size()));
  std::vector<Rational> b(unknowns.size());
  for (std::size_t i = 0; i < unknowns.size(); ++i) {
    const auto& action = mdp.action(policy[unknowns[i]]);
    a[i][i] += 1;
    b[i] = action.weight[dimension];
    for (const auto& o : action.outcomes)
      if (!target.contains(o.target)) a[i][slot[o.target]] -= o.probability;
  }
  auto x = solve_linear(std::move(a), std::move(b));
  std::vector<Rational> values(n, Rational(0));
  for (std::size_t i = 0; i < unknowns.size(); ++i) values[unknowns[i]] = x[i];
  return values;
}

Rational q_value(const Action& action, std::size_t dimension, const std::vector<Rational>& values) {
  Rational q = action.weight[dimension];
  for (const auto& o : action.outcomes) q += o.probability * values[o.target];
  return q;
}

MooreStrategy strategy_from_choices(const WeightedMdp& mdp, const std::vector<std::size_t>& chosen) {
  std::vector<std::string> actions;
  for (StateIndex s = 0; s < mdp.state_count(); ++s) actions.push_back(mdp.action(chosen[s]).name);
  return memoryless_strategy(mdp.states(), actions);
}

// ---------------------------------------------------------------------------
// Worst case

/// Dijkstra-style finalization on a game with non-negative weights: player-1
/// states take the minimum over edges, player-2 states the maximum.
std::vector<ExtendedNatural> game_values(const WeightedGame& game, const TargetSet& target, std::size_t dimension) {
  const auto n = game.state_count();
  std::vector<std::vector<std::size_t>> incoming(n);
  for (std::size_t e = 0; e < game.edges().size(); ++e) {
    if (game.edge(e).weight[dimension] < 0)
      throw QueryError("edge '" + game.edge(e).name + "' from '" + game.state_name(game.edge(e).source) +
                       "' has negative weight");
    incoming[game.edge(e).target].push_back(e);
  }

  std::vector<ExtendedNatural> value(n, ExtendedNatural::infinite());
  std::vector<bool> final(n, false);
  std::vector<std::size_t> pending(n);
  std::vector<std::int64_t> tentative_max(n, 0);
  for (StateIndex s = 0; s < n; ++s) pending[s] = game.edges_at(s).size();

  using Entry = std::pair<std::int64_t, StateIndex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (StateIndex s = 0; s < n; ++s)
    if (target.contains(s)) {
      value[s] = std::int64_t{0};
      queue.push({0, s});
    }
  while (!queue.empty()) {
    auto [v, s] = queue.top();
    queue.pop();
    if (final[s]) continue;
    final[s] = true;
    value[s] = v;
    for (auto e : incoming[s]) {
      const auto& edge = game.edge(e);
      const auto p = edge.source;
      if (final[p] || target.contains(p)) continue;
      const auto candidate = v + edge.weight[dimension];
      if (game.owner(p) == Player::one) {
        if (value[p].is_infinite() || candidate < value[p].value()) {
          value[p] = candidate;
          queue.push({candidate, p});
        }
      } else {
        tentative_max[p] = std::max(tentative_max[p], candidate);
        if (--pending[p] == 0) {
          value[p] = tentative_max[p];
          queue.push({tentative_max[p], p});
        }
      }
    }
  }
  for (StateIndex s = 0; s < n; ++s)
    if (!final[s]) value[s] = ExtendedNatural::infinite();
  return value;
}

/// For each player-1 state, the lowest-named edge minimizing weight + value.
std::vector<std::size_t> argmin_edges(const WeightedGame& game, std::size_t dimension,
                                      const std::vector<ExtendedNatural>& value) {
  std::vector<std::size_t> chosen(game.state_count(), SIZE_MAX);
  for (StateIndex s = 0; s < game.state_count(); ++s) {
    if (game.owner(s) != Player::one) continue;
    chosen[s] = game.edges_at(s).front();
    std::optional<std::int64_t> best;
    for (auto e : game.edges_at(s)) {
      const auto& succ = value[game.edge(e).target];
      if (succ.is_infinite()) continue;
      const auto total = game.edge(e).weight[dimension] + succ.value();
      if (!best || total < *best) {
        best = total;
        chosen[s] = e;
      }
    }
  }
  return chosen;
}

}  // namespace

ExpectationSolution solve_expectation(const WeightedMdp& mdp, const TargetSet& target, std::size_t dimension) {
  require_positive_weights(mdp, target, dimension);
  const auto n = mdp.state_count();
  const auto region = almost_sure_region(mdp, target);

  // proper initial policy: attractor layers towards the target
  std::vector<std::size_t> policy(n);
  for (StateIndex s = 0; s < n; ++s) policy[s] = mdp.actions_at(s).front();
  std::vector<bool> layered(n, false);
  for (StateIndex s = 0; s < n; ++s) layered[s] = target.contains(s) && region.member[s];
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<bool> next = layered;
    for (StateIndex s = 0; s < n; ++s) {
      if (layered[s] || !region.member[s]) continue;
      for (auto a : region.allowed[s]) {
        const auto& outcomes = mdp.action(a).outcomes;
        if (std::any_of(outcomes.begin(), outcomes.end(), [&](const Outcome& o) { return layered[o.target]; })) {
          policy[s] = a;
          next[s] = changed = true;
          break;
        }
      }
    }
    layered = std::move(next);
  }

  std::vector<Rational> values = evaluate_policy(mdp, target, dimension, region.member, policy);
  for (bool improved = true; improved;) {
    improved = false;
    for (StateIndex s = 0; s < n; ++s) {
      if (!region.member[s] || target.contains(s)) continue;
      const Rational current = q_value(mdp.action(policy[s]), dimension, values);
      std::size_t best_action = policy[s];
      Rational best = current;
      for (auto a : region.allowed[s]) {
        Rational q = q_value(mdp.action(a), dimension, values);
        if (q < best) {
          best = q;
          best_action = a;
        }
      }
      if (best < current) {
        policy[s] = best_action;
        improved = true;
      }
    }
    if (improved) values = evaluate_policy(mdp, target, dimension, region.member, policy);
  }

  // canonical greedy policy; any policy greedy for the optimal values is proper
  for (StateIndex s = 0; s < n; ++s) {
    if (!region.member[s] || target.contains(s)) continue;
    std::optional<Rational> best;
    for (auto a : region.allowed[s]) {
      Rational q = q_value(mdp.action(a), dimension, values);
      if (!best || q < *best) {
        best = q;
        policy[s] = a;
      }
    }
  }

  std::vector<ExtendedRational> state_values;
  for (StateIndex s = 0; s < n; ++s)
    state_values.push_back(region.member[s] ? ExtendedRational(values[s]) : ExtendedRational::infinite());
  auto value = state_values[mdp.initial()];
  return {std::move(value), std::move(state_values), strategy_from_choices(mdp, policy)};
}

WeightedGame adversarial_view(const WeightedMdp& mdp) {
  GameDescription raw;
  raw.dimensions = mdp.dimensions();
  raw.dimension_names = mdp.dimension_names();
  raw.player1 = mdp.states();
  raw.initial = mdp.state_name(mdp.initial());
  std::set<std::string> taken(mdp.states().begin(), mdp.states().end());
  const WeightVector zero(mdp.dimensions(), 0);
  for (const auto& action : mdp.actions()) {
    std::string node = mdp.state_name(action.source) + "/" + action.name;
    while (!taken.insert(node).second) node += "'";
    raw.player2.push_back(node);
    raw.edges.push_back({action.name, mdp.state_name(action.source), node, action.weight});
    for (const auto& o : action.outcomes) raw.edges.push_back({"", node, mdp.state_name(o.target), zero});
  }
  return validate_game(raw);
}

std::vector<ExtendedNatural> worstcase_values(const WeightedMdp& mdp, const TargetSet& target, std::size_t dimension) {
  require_positive_weights(mdp, target, dimension);
  const auto view = adversarial_view(mdp);
  std::vector<bool> members(view.state_count(), false);
  for (auto t : target.indices()) members[t] = true;  // MDP states keep their indices
  auto values = game_values(view, TargetSet(std::move(members)), dimension);
  values.resize(mdp.state_count(), ExtendedNatural::infinite());
  return values;
}

WorstCaseSolution solve_worstcase(const WeightedMdp& mdp, const TargetSet& target, std::size_t dimension) {
  require_positive_weights(mdp, target, dimension);
  const auto view = adversarial_view(mdp);
  std::vector<bool> members(view.state_count(), false);
  for (auto t : target.indices()) members[t] = true;
  auto view_values = game_values(view, TargetSet(std::move(members)), dimension);
  const auto edges = argmin_edges(view, dimension, view_values);
  std::vector<std::string> actions;
  for (StateIndex s = 0; s < mdp.state_count(); ++s) actions.push_back(view.edge(edges[s]).name);
  view_values.resize(mdp.state_count(), ExtendedNatural::infinite());
  auto value = view_values[mdp.initial()];
  return {std::move(value), std::move(view_values), memoryless_strategy(mdp.states(), actions)};
}

WorstCaseSolution solve_worstcase(const WeightedGame& game, const TargetSet& target, std::size_t dimension) {
  if (target.universe_size() != game.state_count())
    throw QueryError("target set does not match the game's state space");
  if (dimension >= game.dimensions()) throw QueryError("dimension index " + std::to_string(dimension) + " out of range");
  for (const auto& e : game.edges())
    if (!target.contains(e.source) && e.weight[dimension] <= 0)
      throw QueryError("edge '" + e.name + "' from '" + game.state_name(e.source) +
                       "' has non-positive weight on dimension '" + game.dimension_names()[dimension] + "'");
  auto values = game_values(game, target, dimension);
  const auto edges = argmin_edges(game, dimension, values);
  std::vector<std::string> states, choices;
  for (StateIndex s = 0; s < game.state_count(); ++s) {
    if (game.owner(s) != Player::one) continue;
    states.push_back(game.state_name(s));
    choices.push_back(game.edge(edges[s]).name);
  }
  auto value = values[game.initial()];
  return {std::move(value), std::move(values), memoryless_strategy(states, choices)};
}

}  // namespace qsp
