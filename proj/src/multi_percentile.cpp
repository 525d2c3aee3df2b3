#include "qsp/multi_percentile.hpp"

#include <string>

#include "qsp/chain.hpp"

namespace qsp {

MultiUnfolding::MultiUnfolding(const WeightedMdp& mdp, std::span<const PercentileConstraint> constraints)
    : mdp_(&mdp), constraints_(constraints) {
  auto start = root();
  if (resolved(start)) return;
  index_[start] = 0;
  running_.push_back(start);
  for (std::size_t i = 0; i < running_.size(); ++i) {
    const auto node = running_[i];
    for (auto a : mdp.actions_at(node.state))
      for (const auto& o : mdp.action(a).outcomes) {
        auto next = successor(node, a, o.target);
        if (!resolved(next) && index_.try_emplace(next, running_.size()).second) running_.push_back(std::move(next));
      }
  }
}

MultiUnfolding::Node MultiUnfolding::root() const {
  Node node{mdp_->initial(), {}};
  for (const auto& c : constraints_) node.status.push_back(c.target.contains(node.state) ? satisfied : 0);
  return node;
}

MultiUnfolding::Node MultiUnfolding::successor(const Node& node, std::size_t action, StateIndex target) const {
  const auto& weight = mdp_->action(action).weight;
  Node next{target, node.status};
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    auto& st = next.status[i];
    if (st < 0) continue;
    st += weight[constraints_[i].dimension];
    if (st > constraints_[i].bound)
      st = failed;
    else if (constraints_[i].target.contains(target))
      st = satisfied;
  }
  return next;
}

bool MultiUnfolding::resolved(const Node& node) const {
  for (auto st : node.status)
    if (st >= 0) return false;
  return true;
}

std::optional<std::size_t> MultiUnfolding::find(const Node& node) const {
  auto it = index_.find(node);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

OccupationLP build_occupation_lp(const MultiUnfolding& unfolding, std::span<const PercentileConstraint> constraints) {
  using Relation = LinearProgram::Relation;
  const auto& mdp = unfolding.mdp();
  const auto& nodes = unfolding.running_nodes();
  OccupationLP lp;
  std::vector<std::vector<std::size_t>> vars_of(nodes.size());
  for (std::size_t n = 0; n < nodes.size(); ++n)
    for (auto a : mdp.actions_at(nodes[n].state)) {
      vars_of[n].push_back(lp.variables.size());
      lp.variables.emplace_back(n, a);
    }
  lp.program.variables = lp.variables.size();

  // flow conservation: outflow - inflow = [n is the root]
  std::vector<LinearProgram::Row> flow(nodes.size());
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    flow[n].relation = Relation::equal;
    flow[n].rhs = n == 0 ? 1 : 0;
    for (auto v : vars_of[n]) flow[n].coefficients.emplace_back(v, Rational(1));
  }
  std::vector<LinearProgram::Row> reach(constraints.size());
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    reach[i].relation = Relation::greater_equal;
    reach[i].rhs = constraints[i].alpha;
  }
  for (std::size_t v = 0; v < lp.variables.size(); ++v) {
    const auto [n, a] = lp.variables[v];
    for (const auto& o : mdp.action(a).outcomes) {
      const auto next = unfolding.successor(nodes[n], a, o.target);
      if (auto m = unfolding.find(next)) flow[*m].coefficients.emplace_back(v, Rational(-o.probability));
      for (std::size_t i = 0; i < constraints.size(); ++i)
        if (nodes[n].status[i] >= 0 && next.status[i] == MultiUnfolding::satisfied) {
          reach[i].coefficients.emplace_back(v, o.probability);
          lp.program.maximize.emplace_back(v, o.probability);
        }
    }
  }
  for (auto& row : flow) lp.program.rows.push_back(std::move(row));
  for (std::size_t i = 0; i < constraints.size(); ++i)
    if (unfolding.root().status[i] != MultiUnfolding::satisfied) lp.program.rows.push_back(std::move(reach[i]));
  return lp;
}

namespace {

std::string node_name(const WeightedMdp& mdp, const MultiUnfolding::Node& node) {
  std::string name = mdp.state_name(node.state) + "@";
  for (std::size_t i = 0; i < node.status.size(); ++i) {
    if (i) name += ",";
    const auto st = node.status[i];
    name += st == MultiUnfolding::satisfied ? "sat" : st == MultiUnfolding::failed ? "fail" : std::to_string(st);
  }
  return name;
}

MooreStrategy strategy_from_occupation(const MultiUnfolding& unfolding, const OccupationLP& lp,
                                       const std::vector<Rational>& y) {
  const auto& mdp = unfolding.mdp();
  const auto& nodes = unfolding.running_nodes();

  // randomized memoryless policy on the unfolding
  std::vector<ChoiceDistribution> policy(nodes.size());
  {
    std::vector<Rational> total(nodes.size());
    for (std::size_t v = 0; v < y.size(); ++v) total[lp.variables[v].first] += y[v];
    for (std::size_t v = 0; v < y.size(); ++v) {
      const auto [n, a] = lp.variables[v];
      if (total[n] > 0 && y[v] > 0) policy[n].emplace_back(mdp.action(a).name, y[v] / total[n]);
    }
    for (std::size_t n = 0; n < nodes.size(); ++n)
      if (policy[n].empty()) policy[n].emplace_back(mdp.action(mdp.actions_at(nodes[n].state).front()).name, 1);
  }

  // memory: running nodes reachable under the policy, plus "done"
  std::vector<std::size_t> order;
  std::map<std::size_t, MemoryIndex> memory_of;
  if (!nodes.empty()) {
    order.push_back(0);
    memory_of[0] = 0;
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& node = nodes[order[i]];
    for (const auto& [name, p] : policy[order[i]]) {
      const auto* action = mdp.find_action(node.state, name);
      const auto a = static_cast<std::size_t>(action - mdp.actions().data());
      for (const auto& o : action->outcomes)
        if (auto m = unfolding.find(unfolding.successor(node, a, o.target)))
          if (memory_of.try_emplace(*m, order.size()).second) order.push_back(*m);
    }
  }
  std::vector<std::string> names;
  for (auto n : order) names.push_back(node_name(mdp, nodes[n]));
  names.push_back("done");
  const MemoryIndex done = names.size() - 1;
  MooreStrategy strategy(std::move(names), order.empty() ? done : 0);

  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& node = nodes[order[i]];
    const auto& dist = policy[order[i]];
    strategy.set_choice(i, mdp.state_name(node.state), dist);
    const bool randomized = dist.size() > 1;
    for (const auto& [name, p] : dist) {
      const auto* action = mdp.find_action(node.state, name);
      const auto a = static_cast<std::size_t>(action - mdp.actions().data());
      for (const auto& o : action->outcomes) {
        auto m = unfolding.find(unfolding.successor(node, a, o.target));
        const auto next = m ? memory_of.at(*m) : done;
        if (randomized)
          strategy.set_update(i, mdp.state_name(o.target), name, next);
        else
          strategy.set_update(i, mdp.state_name(o.target), next);
      }
    }
  }
  for (StateIndex s = 0; s < mdp.state_count(); ++s)
    strategy.set_pure_choice(done, mdp.state_name(s), mdp.action(mdp.actions_at(s).front()).name);
  strategy.set_update(done, std::string(MooreStrategy::any_state), done);
  return strategy;
}

}  // namespace

MultiPercentileSolution solve_multi_percentile(const WeightedMdp& mdp,
                                               std::span<const PercentileConstraint> constraints) {
  if (constraints.empty()) throw QueryError("multi-constraint percentile query needs at least one constraint");
  for (const auto& c : constraints) {
    require_positive_weights(mdp, c.target, c.dimension);
    if (!is_probability(c.alpha)) throw QueryError("probability threshold " + to_string(c.alpha) + " outside [0, 1]");
    if (c.bound < 0) throw QueryError("value threshold must be a natural number");
  }

  const MultiUnfolding unfolding(mdp, constraints);
  const auto lp = build_occupation_lp(unfolding, constraints);
  auto y = solve_lp(lp.program);
  if (!y) return {false, std::nullopt, {}};

  auto strategy = strategy_from_occupation(unfolding, lp, *y);
  const auto chain = induce_chain(mdp, strategy);
  std::vector<Rational> achieved;
  for (const auto& c : constraints) achieved.push_back(prob_ts_leq(chain, c.target, c.dimension, c.bound));
  for (std::size_t i = 0; i < constraints.size(); ++i)
    if (achieved[i] < constraints[i].alpha)
      throw std::logic_error("occupation strategy misses constraint " + std::to_string(i + 1));
  return {true, std::move(strategy), std::move(achieved)};
}

}  // namespace qsp
