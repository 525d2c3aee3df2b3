#include "qsp/unfolding.hpp"

#include <deque>
#include <map>
#include <set>
#include <string>

namespace qsp {

BudgetUnfolding::BudgetUnfolding(const WeightedMdp& mdp, const TargetSet& target, std::size_t dimension,
                                 std::int64_t bound)
    : mdp_(&mdp), target_(&target), dimension_(dimension), bound_(bound) {}

UnfoldedNode BudgetUnfolding::root() const {
  if (target_->contains(mdp_->initial())) return {UnfoldedNode::Kind::success};
  if (bound_ < 0) return {UnfoldedNode::Kind::fail};
  return {UnfoldedNode::Kind::running, mdp_->initial(), 0};
}

UnfoldedNode BudgetUnfolding::successor(const UnfoldedNode& node, std::size_t action_index,
                                       StateIndex target) const {
  const auto spent = node.spent + mdp_->action(action_index).weight[dimension_];
  if (spent > bound_) return {UnfoldedNode::Kind::fail};
  if (target_->contains(target)) return {UnfoldedNode::Kind::success};
  return {UnfoldedNode::Kind::running, target, spent};
}

std::vector<std::pair<UnfoldedNode, Rational>> BudgetUnfolding::step(const UnfoldedNode& node,
                                                                     std::size_t action_index) const {
  std::vector<std::pair<UnfoldedNode, Rational>> out;
  auto add = [&](UnfoldedNode next, const Rational& p) {
    for (auto& [existing, q] : out)
      if (existing == next) {
        q += p;
        return;
      }
    out.emplace_back(next, p);
  };
  for (const auto& o : mdp_->action(action_index).outcomes) add(successor(node, action_index, o.target), o.probability);
  return out;
}

std::size_t BudgetUnfolding::reachable_running_nodes() const {
  auto start = root();
  if (start.kind != UnfoldedNode::Kind::running) return 0;
  std::set<std::pair<std::int64_t, StateIndex>> seen{{0, start.state}};
  std::deque<UnfoldedNode> queue{start};
  while (!queue.empty()) {
    auto node = queue.front();
    queue.pop_front();
    for (auto a : mdp_->actions_at(node.state))
      for (const auto& [next, p] : step(node, a))
        if (next.kind == UnfoldedNode::Kind::running && seen.insert({next.spent, next.state}).second)
          queue.push_back(next);
  }
  return seen.size();
}

MooreStrategy budget_strategy(const BudgetUnfolding& unfolding, const BudgetPolicy& policy) {
  const auto& mdp = unfolding.mdp();
  auto name_of = [&](const UnfoldedNode& n) { return mdp.state_name(n.state) + "@" + std::to_string(n.spent); };

  // collect reachable running nodes under the policy
  std::vector<UnfoldedNode> nodes;
  std::map<std::pair<std::int64_t, StateIndex>, std::size_t> index;
  auto start = unfolding.root();
  if (start.kind == UnfoldedNode::Kind::running) {
    index[{0, start.state}] = 0;
    nodes.push_back(start);
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto node = nodes[i];
    const auto a = policy.action.at(static_cast<std::size_t>(node.spent)).at(node.state);
    if (a == SIZE_MAX) throw StrategyError("policy undefined at reachable node " + name_of(node));
    for (const auto& [next, p] : unfolding.step(node, a))
      if (next.kind == UnfoldedNode::Kind::running && index.try_emplace({next.spent, next.state}, nodes.size()).second)
        nodes.push_back(next);
  }

  std::vector<std::string> memory;
  for (const auto& n : nodes) memory.push_back(name_of(n));
  memory.push_back("done");
  const MemoryIndex done = memory.size() - 1;
  MooreStrategy strategy(std::move(memory), nodes.empty() ? done : 0);

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& node = nodes[i];
    const auto a = policy.action[static_cast<std::size_t>(node.spent)][node.state];
    const auto& action = mdp.action(a);
    strategy.set_pure_choice(i, mdp.state_name(node.state), action.name);
    // outcomes have distinct targets, so the successor identifies the next node
    for (const auto& o : action.outcomes) {
      const auto next = unfolding.successor(node, a, o.target);
      const auto m = next.kind == UnfoldedNode::Kind::running ? index.at({next.spent, next.state}) : done;
      strategy.set_update(i, mdp.state_name(o.target), m);
    }
  }
  for (StateIndex s = 0; s < mdp.state_count(); ++s)
    strategy.set_pure_choice(done, mdp.state_name(s), mdp.action(mdp.actions_at(s).front()).name);
  strategy.set_update(done, std::string(MooreStrategy::any_state), done);
  return strategy;
}

}  // namespace qsp
