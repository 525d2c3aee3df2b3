#include "qsp/model.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace qsp {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string text = "invalid model:";
  for (const auto& issue : issues) text += "\n  - " + issue;
  return text;
}

std::optional<std::size_t> index_of(const std::vector<std::string>& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

std::vector<std::string> default_dimension_names(std::size_t d, const std::vector<std::string>& given,
                                                 std::vector<std::string>& issues) {
  if (given.empty()) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < d; ++i) names.push_back("dim" + std::to_string(i + 1));
    return names;
  }
  if (given.size() != d)
    issues.push_back("dimension_names has " + std::to_string(given.size()) + " entries but dimensions = " +
                     std::to_string(d));
  std::set<std::string> seen;
  for (const auto& n : given)
    if (!seen.insert(n).second) issues.push_back("duplicate dimension name '" + n + "'");
  return given;
}

void check_unique_states(const std::vector<std::string>& states, std::vector<std::string>& issues) {
  std::set<std::string> seen;
  for (const auto& s : states) {
    if (s.empty()) issues.push_back("empty state identifier");
    if (s == MooreStrategy::any_state) issues.push_back("state identifier '*' is reserved");
    if (!seen.insert(s).second) issues.push_back("duplicate state '" + s + "'");
  }
}

}  // namespace

ModelError::ModelError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

// ---------------------------------------------------------------------------

std::optional<StateIndex> WeightedMdp::find_state(std::string_view name) const { return index_of(states_, name); }

std::optional<std::size_t> WeightedMdp::find_dimension(std::string_view name) const {
  return index_of(dimension_names_, name);
}

const Action* WeightedMdp::find_action(StateIndex s, std::string_view name) const {
  for (auto idx : actions_at(s))
    if (actions_[idx].name == name) return &actions_[idx];
  return nullptr;
}

MdpDescription WeightedMdp::describe() const {
  MdpDescription raw;
  raw.dimensions = dimensions();
  raw.dimension_names = dimension_names_;
  raw.states = states_;
  raw.initial = states_[initial_];
  for (const auto& a : actions_) {
    MdpDescription::ActionEntry entry{a.name, states_[a.source], a.weight, {}};
    for (const auto& o : a.outcomes) entry.distribution.emplace_back(states_[o.target], o.probability);
    raw.actions.push_back(std::move(entry));
  }
  return raw;
}

WeightedMdp validate_mdp(const MdpDescription& raw) {
  std::vector<std::string> issues;
  WeightedMdp mdp;

  if (raw.dimensions == 0) issues.push_back("dimensions must be at least 1");
  mdp.dimension_names_ = default_dimension_names(raw.dimensions, raw.dimension_names, issues);
  if (raw.states.empty()) issues.push_back("model has no states");
  check_unique_states(raw.states, issues);
  mdp.states_ = raw.states;

  if (auto init = index_of(raw.states, raw.initial)) {
    mdp.initial_ = *init;
  } else {
    issues.push_back("initial state '" + raw.initial + "' is not a declared state");
  }

  std::set<std::pair<std::string, std::string>> names_seen;
  for (std::size_t i = 0; i < raw.actions.size(); ++i) {
    const auto& entry = raw.actions[i];
    const std::string where = "action '" + entry.name + "' at '" + entry.source + "'";
    bool ok = true;
    auto source = index_of(raw.states, entry.source);
    if (!source) {
      issues.push_back(where + ": source is not a declared state");
      ok = false;
    }
    if (entry.name.empty()) {
      issues.push_back("action #" + std::to_string(i) + " at '" + entry.source + "' has an empty name");
      ok = false;
    }
    if (!names_seen.emplace(entry.source, entry.name).second) {
      issues.push_back(where + ": duplicate action name at this state");
      ok = false;
    }
    if (entry.weight.size() != raw.dimensions) {
      issues.push_back(where + ": weight has " + std::to_string(entry.weight.size()) + " entries, expected " +
                       std::to_string(raw.dimensions));
      ok = false;
    }
    if (entry.distribution.empty()) {
      issues.push_back(where + ": empty distribution");
      ok = false;
    }
    Rational total = 0;
    std::map<StateIndex, Rational> merged;
    for (const auto& [target, p] : entry.distribution) {
      auto t = index_of(raw.states, target);
      if (!t) {
        issues.push_back(where + ": successor '" + target + "' is not a declared state");
        ok = false;
        continue;
      }
      if (p < 0) {
        issues.push_back(where + ": negative probability " + to_string(p) + " for '" + target + "'");
        ok = false;
      }
      total += p;
      merged[*t] += p;
    }
    if (total != 1) {
      issues.push_back(where + ": distribution sums to " + to_string(total));
      ok = false;
    }
    if (!ok) continue;
    Action action{entry.name, *source, entry.weight, {}};
    for (const auto& [t, p] : merged)
      if (p > 0) action.outcomes.push_back({t, p});
    mdp.actions_.push_back(std::move(action));
  }

  // canonical order: by source state, then by name
  std::stable_sort(mdp.actions_.begin(), mdp.actions_.end(), [](const Action& a, const Action& b) {
    return std::tie(a.source, a.name) < std::tie(b.source, b.name);
  });
  mdp.by_state_.assign(mdp.states_.size(), {});
  for (std::size_t i = 0; i < mdp.actions_.size(); ++i) mdp.by_state_[mdp.actions_[i].source].push_back(i);
  for (std::size_t s = 0; s < mdp.states_.size(); ++s)
    if (mdp.by_state_[s].empty()) issues.push_back("state '" + mdp.states_[s] + "' has no available action");

  if (!issues.empty()) throw ModelError(std::move(issues));
  return mdp;
}

// ---------------------------------------------------------------------------

std::optional<StateIndex> WeightedGame::find_state(std::string_view name) const { return index_of(states_, name); }

std::optional<std::size_t> WeightedGame::find_dimension(std::string_view name) const {
  return index_of(dimension_names_, name);
}

const Edge* WeightedGame::find_edge(StateIndex s, std::string_view name) const {
  for (auto idx : edges_at(s))
    if (edges_[idx].name == name) return &edges_[idx];
  return nullptr;
}

GameDescription WeightedGame::describe() const {
  GameDescription raw;
  raw.dimensions = dimensions();
  raw.dimension_names = dimension_names_;
  for (StateIndex s = 0; s < states_.size(); ++s)
    (owner_[s] == Player::one ? raw.player1 : raw.player2).push_back(states_[s]);
  raw.initial = states_[initial_];
  for (const auto& e : edges_) raw.edges.push_back({e.name, states_[e.source], states_[e.target], e.weight});
  return raw;
}

WeightedGame validate_game(const GameDescription& raw) {
  std::vector<std::string> issues;
  WeightedGame game;

  if (raw.dimensions == 0) issues.push_back("dimensions must be at least 1");
  game.dimension_names_ = default_dimension_names(raw.dimensions, raw.dimension_names, issues);

  std::set<std::string> p1(raw.player1.begin(), raw.player1.end());
  for (const auto& s : raw.player2)
    if (p1.count(s)) issues.push_back("state '" + s + "' belongs to both players");
  for (const auto& s : raw.player1) {
    game.states_.push_back(s);
    game.owner_.push_back(Player::one);
  }
  for (const auto& s : raw.player2) {
    if (p1.count(s)) continue;
    game.states_.push_back(s);
    game.owner_.push_back(Player::two);
  }
  if (game.states_.empty()) issues.push_back("game has no states");
  check_unique_states(raw.player1, issues);
  check_unique_states(raw.player2, issues);

  if (auto init = index_of(game.states_, raw.initial)) {
    game.initial_ = *init;
  } else {
    issues.push_back("initial state '" + raw.initial + "' is not a declared state");
  }

  std::set<std::pair<std::string, std::string>> names_seen;
  for (const auto& entry : raw.edges) {
    const std::string name = entry.name.empty() ? entry.target : entry.name;
    const std::string where = "edge '" + name + "' from '" + entry.source + "'";
    bool ok = true;
    auto source = index_of(game.states_, entry.source);
    auto target = index_of(game.states_, entry.target);
    if (!source) {
      issues.push_back(where + ": source is not a declared state");
      ok = false;
    }
    if (!target) {
      issues.push_back(where + ": target '" + entry.target + "' is not a declared state");
      ok = false;
    }
    if (!names_seen.emplace(entry.source, name).second) {
      issues.push_back(where + ": duplicate edge name at this state");
      ok = false;
    }
    if (entry.weight.size() != raw.dimensions) {
      issues.push_back(where + ": weight has " + std::to_string(entry.weight.size()) + " entries, expected " +
                       std::to_string(raw.dimensions));
      ok = false;
    }
    if (ok) game.edges_.push_back({name, *source, *target, entry.weight});
  }
  std::stable_sort(game.edges_.begin(), game.edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.source, a.name) < std::tie(b.source, b.name);
  });
  game.by_state_.assign(game.states_.size(), {});
  for (std::size_t i = 0; i < game.edges_.size(); ++i) game.by_state_[game.edges_[i].source].push_back(i);
  for (std::size_t s = 0; s < game.states_.size(); ++s)
    if (game.by_state_[s].empty()) issues.push_back("state '" + game.states_[s] + "' has no outgoing edge");

  if (!issues.empty()) throw ModelError(std::move(issues));
  return game;
}

// ---------------------------------------------------------------------------

TargetSet::TargetSet(std::span<const std::string> model_states, std::span<const std::string> names)
    : members_(model_states.size(), false) {
  std::vector<std::string> issues;
  if (names.empty()) issues.push_back("target set is empty");
  for (const auto& n : names) {
    auto it = std::find(model_states.begin(), model_states.end(), n);
    if (it == model_states.end())
      issues.push_back("target state '" + n + "' is not a model state");
    else
      members_[static_cast<std::size_t>(it - model_states.begin())] = true;
  }
  if (!issues.empty()) throw ModelError(std::move(issues));
}

TargetSet::TargetSet(std::vector<bool> members) : members_(std::move(members)) {
  if (std::none_of(members_.begin(), members_.end(), [](bool b) { return b; }))
    throw ModelError({"target set is empty"});
}

std::vector<StateIndex> TargetSet::indices() const {
  std::vector<StateIndex> out;
  for (StateIndex s = 0; s < members_.size(); ++s)
    if (members_[s]) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------------------

MooreStrategy::MooreStrategy(std::vector<std::string> memory_names, MemoryIndex initial_memory)
    : memory_names_(std::move(memory_names)), initial_memory_(initial_memory) {
  if (memory_names_.empty()) throw StrategyError("strategy needs at least one memory state");
  std::set<std::string> seen;
  for (const auto& m : memory_names_)
    if (!seen.insert(m).second) throw StrategyError("duplicate memory state '" + m + "'");
  check_memory(initial_memory_);
}

std::optional<MemoryIndex> MooreStrategy::find_memory(std::string_view name) const {
  return index_of(memory_names_, name);
}

void MooreStrategy::check_memory(MemoryIndex m) const {
  if (m >= memory_names_.size()) throw StrategyError("memory index " + std::to_string(m) + " out of range");
}

void MooreStrategy::set_choice(MemoryIndex m, std::string state, ChoiceDistribution distribution) {
  check_memory(m);
  std::map<std::string, Rational> merged;
  Rational total = 0;
  for (auto& [action, p] : distribution) {
    if (p < 0)
      throw StrategyError("negative probability for '" + action + "' at (" + memory_names_[m] + ", " + state + ")");
    merged[action] += p;
    total += p;
  }
  if (total != 1)
    throw StrategyError("choice at (" + memory_names_[m] + ", " + state + ") sums to " + to_string(total));
  ChoiceDistribution normalized;
  for (auto& [action, p] : merged)
    if (p > 0) normalized.emplace_back(action, p);
  choices_[{m, std::move(state)}] = std::move(normalized);
}

void MooreStrategy::set_pure_choice(MemoryIndex m, std::string state, std::string action) {
  set_choice(m, std::move(state), {{std::move(action), Rational(1)}});
}

void MooreStrategy::set_update(MemoryIndex m, std::string successor, MemoryIndex next) {
  check_memory(m);
  check_memory(next);
  updates_[{m, std::move(successor)}].any_action = next;
}

void MooreStrategy::set_update(MemoryIndex m, std::string successor, std::string action, MemoryIndex next) {
  check_memory(m);
  check_memory(next);
  updates_[{m, std::move(successor)}].by_action[std::move(action)] = next;
}

const ChoiceDistribution* MooreStrategy::choice(MemoryIndex m, std::string_view state) const {
  auto it = choices_.find({m, std::string(state)});
  return it == choices_.end() ? nullptr : &it->second;
}

std::optional<MemoryIndex> MooreStrategy::next_memory(MemoryIndex m, std::string_view action,
                                                      std::string_view successor) const {
  auto lookup = [&](std::string_view key) -> std::optional<MemoryIndex> {
    auto it = updates_.find({m, std::string(key)});
    if (it == updates_.end()) return std::nullopt;
    if (auto a = it->second.by_action.find(std::string(action)); a != it->second.by_action.end()) return a->second;
    return it->second.any_action;
  };
  if (auto next = lookup(successor)) return next;
  return lookup(any_state);
}

bool MooreStrategy::is_pure() const {
  return std::all_of(choices_.begin(), choices_.end(), [](const auto& kv) { return kv.second.size() == 1; });
}

StrategyStep strategy_step(const MooreStrategy& strategy, MemoryIndex memory, std::string_view state) {
  const auto* dist = strategy.choice(memory, state);
  if (!dist)
    throw StrategyError("incomplete strategy: no choice at (" + strategy.memory_name(memory) + ", " +
                        std::string(state) + ")");
  return StrategyStep{*dist, [&strategy, memory](std::string_view action, std::string_view successor) {
                        return strategy.next_memory(memory, action, successor);
                      }};
}

MooreStrategy memoryless_strategy(std::span<const std::string> states, std::span<const std::string> actions) {
  if (states.size() != actions.size()) throw StrategyError("one action per state required");
  MooreStrategy strategy({"m0"}, 0);
  for (std::size_t i = 0; i < states.size(); ++i) strategy.set_pure_choice(0, states[i], actions[i]);
  strategy.set_update(0, std::string(MooreStrategy::any_state), 0);
  return strategy;
}

namespace {

template <class Model, class Lookup>
std::vector<std::string> check_choices(const MooreStrategy& strategy, const Model& model, Lookup&& has_choice) {
  std::vector<std::string> issues;
  for (const auto& [key, dist] : strategy.choices()) {
    const auto& [m, state] = key;
    auto s = model.find_state(state);
    const std::string where = "choice at (" + strategy.memory_name(m) + ", " + state + ")";
    if (!s) {
      issues.push_back(where + ": unknown state '" + state + "'");
      continue;
    }
    for (const auto& [action, p] : dist)
      if (!has_choice(*s, action)) issues.push_back(where + ": '" + action + "' is not available there");
  }
  for (const auto& [key, rule] : strategy.updates()) {
    const auto& state = key.second;
    if (state != MooreStrategy::any_state && !model.find_state(state))
      issues.push_back("update at (" + strategy.memory_name(key.first) + ", " + state + "): unknown state '" +
                       state + "'");
  }
  return issues;
}

}  // namespace

std::vector<std::string> check_compatible(const MooreStrategy& strategy, const WeightedMdp& mdp) {
  return check_choices(strategy, mdp,
                       [&](StateIndex s, const std::string& a) { return mdp.find_action(s, a) != nullptr; });
}

std::vector<std::string> check_compatible(const MooreStrategy& strategy, const WeightedGame& game) {
  auto issues = check_choices(strategy, game,
                              [&](StateIndex s, const std::string& a) { return game.find_edge(s, a) != nullptr; });
  for (const auto& [key, dist] : strategy.choices()) {
    auto s = game.find_state(key.second);
    if (s && game.owner(*s) == Player::two)
      issues.push_back("choice at (" + strategy.memory_name(key.first) + ", " + key.second +
                       "): state belongs to the adversary");
  }
  return issues;
}

}  // namespace qsp
