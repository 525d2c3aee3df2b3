#include "qsp/verifier.hpp"

#include <algorithm>
#include <map>

#include "qsp/chain.hpp"

namespace qsp {

ProductGraph build_product(const WeightedGame& game, const MooreStrategy& strategy) {
  if (!strategy.is_pure()) throw StrategyError("only pure strategies can be verified on games");
  ProductGraph product;
  product.game_ = &game;
  std::map<std::pair<StateIndex, MemoryIndex>, std::size_t> index;
  auto intern = [&](StateIndex s, MemoryIndex m) {
    auto [it, fresh] = index.try_emplace({s, m}, product.nodes_.size());
    if (fresh) {
      product.nodes_.push_back({s, m});
      product.out_.emplace_back();
    }
    return it->second;
  };
  intern(game.initial(), strategy.initial_memory());

  for (std::size_t n = 0; n < product.nodes_.size(); ++n) {
    const auto [state, memory] = product.nodes_[n];
    std::vector<std::size_t> moves;
    if (game.owner(state) == Player::one) {
      const auto step = strategy_step(strategy, memory, game.state_name(state));
      const auto& chosen = step.distribution.front().first;
      const Edge* edge = game.find_edge(state, chosen);
      if (!edge)
        throw StrategyError("strategy chooses '" + chosen + "' at '" + game.state_name(state) +
                            "' where no such edge exists");
      moves.push_back(static_cast<std::size_t>(edge - game.edges().data()));
    } else {
      auto at = game.edges_at(state);
      moves.assign(at.begin(), at.end());
    }
    for (auto e : moves) {
      const auto& edge = game.edge(e);
      auto next = strategy.next_memory(memory, edge.name, game.state_name(edge.target));
      if (!next)
        throw StrategyError("incomplete strategy: no memory update at (" + strategy.memory_name(memory) + ", " +
                            game.state_name(edge.target) + ")");
      const auto to = intern(edge.target, *next);
      product.out_[n].push_back({n, to, e});
    }
  }
  return product;
}

namespace {

/// Steps around the cycle through `start` in a predecessor forest.
Walk cycle_from_predecessors(const std::vector<std::optional<ProductStep>>& pred, std::size_t start) {
  Walk cycle;
  auto v = start;
  do {
    cycle.push_back(*pred[v]);
    v = pred[v]->from;
  } while (v != start);
  std::reverse(cycle.begin(), cycle.end());
  return cycle;
}

/// A cycle among nodes accepted by `allowed_node`, using steps accepted by `allowed_step`.
template <class NodeFilter, class StepFilter>
Walk find_cycle(const ProductGraph& product, NodeFilter&& allowed_node, StepFilter&& allowed_step) {
  enum class Mark { fresh, active, done };
  std::vector<Mark> mark(product.size(), Mark::fresh);
  for (std::size_t root = 0; root < product.size(); ++root) {
    if (mark[root] != Mark::fresh || !allowed_node(root)) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};  // node, next step
    Walk path;
    mark[root] = Mark::active;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& out = product.out(node);
      if (next == out.size()) {
        mark[node] = Mark::done;
        stack.pop_back();
        if (!path.empty()) path.pop_back();
        continue;
      }
      const auto step = out[next++];
      if (!allowed_node(step.to) || !allowed_step(step)) continue;
      if (mark[step.to] == Mark::active) {
        auto first = std::find_if(path.begin(), path.end(), [&](const ProductStep& s) { return s.from == step.to; });
        Walk cycle(first, path.end());
        cycle.push_back(step);
        return cycle;
      }
      if (mark[step.to] == Mark::fresh) {
        mark[step.to] = Mark::active;
        path.push_back(step);
        stack.push_back({step.to, 0});
      }
    }
  }
  return {};
}

}  // namespace

std::vector<EnergyResult> check_energy(const ProductGraph& product, std::span<const std::size_t> dimensions) {
  std::vector<EnergyResult> results;
  const auto n = product.size();
  for (auto d : dimensions) {
    if (d >= product.game().dimensions()) throw QueryError("energy dimension out of range");
    std::vector<std::optional<std::int64_t>> dist(n);
    std::vector<std::optional<ProductStep>> pred(n);
    dist[product.initial()] = 0;
    std::optional<std::size_t> relaxed_last;
    for (std::size_t round = 0; round < n; ++round) {
      relaxed_last.reset();
      for (std::size_t u = 0; u < n; ++u) {
        if (!dist[u]) continue;
        for (const auto& step : product.out(u)) {
          const auto candidate = *dist[u] + product.weight(step, d);
          if (!dist[step.to] || candidate < *dist[step.to]) {
            dist[step.to] = candidate;
            pred[step.to] = step;
            relaxed_last = step.to;
          }
        }
      }
      if (!relaxed_last) break;
    }
    EnergyResult result{d, std::nullopt, {}};
    if (relaxed_last) {
      // still relaxing after n rounds: walk back n times to land on the cycle
      auto v = *relaxed_last;
      for (std::size_t i = 0; i < n; ++i) v = pred[v]->from;
      result.witness = cycle_from_predecessors(pred, v);
    } else {
      std::size_t lowest = product.initial();
      for (std::size_t v = 0; v < n; ++v)
        if (dist[v] && *dist[v] < *dist[lowest]) lowest = v;
      result.credit = std::max<std::int64_t>(0, -*dist[lowest]);
      for (auto v = lowest; pred[v] && v != product.initial(); v = pred[v]->from) result.witness.push_back(*pred[v]);
      std::reverse(result.witness.begin(), result.witness.end());
    }
    results.push_back(std::move(result));
  }
  return results;
}

BuchiResult check_buchi(const ProductGraph& product, const TargetSet& accepting) {
  if (accepting.universe_size() != product.game().state_count())
    throw QueryError("accepting set does not match the game's state space");
  auto cycle = find_cycle(
      product, [&](std::size_t n) { return !accepting.contains(product.node(n).state); },
      [](const ProductStep&) { return true; });
  return {cycle.empty(), std::move(cycle)};
}

std::pair<Rational, Walk> max_mean_cycle(const ProductGraph& product, std::size_t dimension) {
  const auto n = product.size();
  if (n == 0) throw QueryError("empty product graph");
  if (dimension >= product.game().dimensions()) throw QueryError("mean-payoff dimension out of range");

  // best[k][v]: heaviest walk with exactly k edges ending in v, from any start
  std::vector<std::vector<std::optional<std::int64_t>>> best(n + 1, std::vector<std::optional<std::int64_t>>(n));
  std::fill(best[0].begin(), best[0].end(), std::int64_t{0});
  for (std::size_t k = 1; k <= n; ++k)
    for (std::size_t u = 0; u < n; ++u) {
      if (!best[k - 1][u]) continue;
      for (const auto& step : product.out(u)) {
        const auto candidate = *best[k - 1][u] + product.weight(step, dimension);
        if (!best[k][step.to] || candidate > *best[k][step.to]) best[k][step.to] = candidate;
      }
    }
  std::optional<Rational> lambda;
  for (std::size_t v = 0; v < n; ++v) {
    if (!best[n][v]) continue;
    std::optional<Rational> worst;
    for (std::size_t k = 0; k < n; ++k) {
      if (!best[k][v]) continue;
      Rational mean(*best[n][v] - *best[k][v], static_cast<long>(n - k));
      mean.canonicalize();
      if (!worst || mean < *worst) worst = mean;
    }
    if (worst && (!lambda || *worst > *lambda)) lambda = worst;
  }

  // witness: cycles of tight edges under longest-path potentials for w - lambda
  std::vector<Rational> potential(n, Rational(0));
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t u = 0; u < n; ++u)
      for (const auto& step : product.out(u)) {
        Rational candidate = potential[u] + product.weight(step, dimension) - *lambda;
        if (candidate > potential[step.to]) {
          potential[step.to] = candidate;
          changed = true;
        }
      }
  }
  auto cycle = find_cycle(
      product, [](std::size_t) { return true; },
      [&](const ProductStep& s) {
        return potential[s.to] == potential[s.from] + product.weight(s, dimension) - *lambda;
      });
  return {*lambda, std::move(cycle)};
}

MeanPayoffResult check_meanpayoff(const ProductGraph& product, std::size_t dimension, const Rational& threshold,
                                  bool strict) {
  auto [mean, cycle] = max_mean_cycle(product, dimension);
  const bool holds = strict ? mean < threshold : mean <= threshold;
  return {holds, std::move(mean), std::move(cycle)};
}

VerificationReport verify(const WeightedGame& game, const MooreStrategy& strategy, const ObjectiveSpec& objectives) {
  if (objectives.energy_dimensions.empty() && !objectives.meanpayoff && !objectives.buchi)
    throw QueryError("objective specification is empty");
  for (auto d : objectives.energy_dimensions)
    if (d >= game.dimensions()) throw QueryError("energy dimension out of range");
  if (objectives.meanpayoff && objectives.meanpayoff->dimension >= game.dimensions())
    throw QueryError("mean-payoff dimension out of range");

  const auto product = build_product(game, strategy);
  VerificationReport report{true, product.size(), {}, {}, {}};
  report.energy = check_energy(product, objectives.energy_dimensions);
  for (const auto& e : report.energy) report.passed = report.passed && e.credit.has_value();
  if (objectives.buchi) {
    report.buchi = check_buchi(product, *objectives.buchi);
    report.passed = report.passed && report.buchi->holds;
  }
  if (objectives.meanpayoff) {
    const auto& mp = *objectives.meanpayoff;
    report.meanpayoff = check_meanpayoff(product, mp.dimension, mp.threshold, mp.strict);
    report.passed = report.passed && report.meanpayoff->holds;
  }
  return report;
}

std::string describe(const ProductGraph& product, const Walk& walk, const MooreStrategy& strategy) {
  const auto& game = product.game();
  auto label = [&](std::size_t n) {
    const auto& node = product.node(n);
    return game.state_name(node.state) + "[" + strategy.memory_name(node.memory) + "]";
  };
  if (walk.empty()) return label(product.initial());
  std::string text = label(walk.front().from);
  for (const auto& step : walk) text += " -" + game.edge(step.edge).name + "-> " + label(step.to);
  return text;
}

}  // namespace qsp
