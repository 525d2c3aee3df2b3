#pragma once

// Weighted MDPs, weighted two-player games, finite-memory (Moore machine)
// strategies and target sets. Models are immutable once validated.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsp/rational.hpp"

namespace qsp {

using Weight = std::int64_t;
using WeightVector = std::vector<Weight>;
using StateIndex = std::size_t;
using MemoryIndex = std::size_t;

/// Raised by validation; carries every violated invariant, each with context.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// ---------------------------------------------------------------------------
// Markov decision processes

struct Outcome {
  StateIndex target;
  Rational probability;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct Action {
  std::string name;
  StateIndex source;
  WeightVector weight;
  std::vector<Outcome> outcomes;  // sorted by target, strictly positive probabilities

  friend bool operator==(const Action&, const Action&) = default;
};

/// Unvalidated MDP as read from a file or built by hand.
struct MdpDescription {
  struct ActionEntry {
    std::string name;
    std::string source;
    WeightVector weight;
    std::vector<std::pair<std::string, Rational>> distribution;
  };
  std::size_t dimensions = 1;
  std::vector<std::string> dimension_names;
  std::vector<std::string> states;
  std::string initial;
  std::vector<ActionEntry> actions;
};

class WeightedMdp {
 public:
  std::size_t state_count() const { return states_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(StateIndex s) const { return states_.at(s); }
  std::optional<StateIndex> find_state(std::string_view name) const;
  StateIndex initial() const { return initial_; }

  std::size_t dimensions() const { return dimension_names_.size(); }
  const std::vector<std::string>& dimension_names() const { return dimension_names_; }
  std::optional<std::size_t> find_dimension(std::string_view name) const;

  const std::vector<Action>& actions() const { return actions_; }
  const Action& action(std::size_t index) const { return actions_.at(index); }
  /// Indices into actions(), ordered by action name.
  std::span<const std::size_t> actions_at(StateIndex s) const { return by_state_.at(s); }
  const Action* find_action(StateIndex s, std::string_view name) const;

  /// Canonical description; validate_mdp(describe()) reproduces *this.
  MdpDescription describe() const;

  friend bool operator==(const WeightedMdp&, const WeightedMdp&) = default;

 private:
  friend WeightedMdp validate_mdp(const MdpDescription& raw);

  std::vector<std::string> states_;
  StateIndex initial_ = 0;
  std::vector<std::string> dimension_names_;
  std::vector<Action> actions_;
  std::vector<std::vector<std::size_t>> by_state_;
};

/// Throws ModelError listing every violated invariant.
WeightedMdp validate_mdp(const MdpDescription& raw);

// ---------------------------------------------------------------------------
// Two-player games

enum class Player { one, two };

struct Edge {
  std::string name;  // unique per source; defaults to the target's name
  StateIndex source;
  StateIndex target;
  WeightVector weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct GameDescription {
  struct EdgeEntry {
    std::string name;  // empty: use target name
    std::string source;
    std::string target;
    WeightVector weight;
  };
  std::size_t dimensions = 1;
  std::vector<std::string> dimension_names;
  std::vector<std::string> player1;
  std::vector<std::string> player2;
  std::string initial;
  std::vector<EdgeEntry> edges;
};

class WeightedGame {
 public:
  std::size_t state_count() const { return states_.size(); }
  /// Player-1 states first, then player-2 states, each in declaration order.
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(StateIndex s) const { return states_.at(s); }
  std::optional<StateIndex> find_state(std::string_view name) const;
  Player owner(StateIndex s) const { return owner_.at(s); }
  StateIndex initial() const { return initial_; }

  std::size_t dimensions() const { return dimension_names_.size(); }
  const std::vector<std::string>& dimension_names() const { return dimension_names_; }
  std::optional<std::size_t> find_dimension(std::string_view name) const;

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t index) const { return edges_.at(index); }
  /// Indices into edges(), ordered by edge name.
  std::span<const std::size_t> edges_at(StateIndex s) const { return by_state_.at(s); }
  const Edge* find_edge(StateIndex s, std::string_view name) const;

  GameDescription describe() const;

  friend bool operator==(const WeightedGame&, const WeightedGame&) = default;

 private:
  friend WeightedGame validate_game(const GameDescription& raw);

  std::vector<std::string> states_;
  std::vector<Player> owner_;
  StateIndex initial_ = 0;
  std::vector<std::string> dimension_names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> by_state_;
};

WeightedGame validate_game(const GameDescription& raw);

// ---------------------------------------------------------------------------
// Target sets

class TargetSet {
 public:
  /// Throws ModelError if `names` is empty or mentions an unknown state.
  TargetSet(std::span<const std::string> model_states, std::span<const std::string> names);
  /// Membership mask; must be non-empty.
  explicit TargetSet(std::vector<bool> members);

  bool contains(StateIndex s) const { return s < members_.size() && members_[s]; }
  std::size_t universe_size() const { return members_.size(); }
  std::vector<StateIndex> indices() const;

 private:
  std::vector<bool> members_;
};

// ---------------------------------------------------------------------------
// Moore-machine strategies

/// Distribution over action (or edge) names: sorted by name, probabilities > 0, sum 1.
using ChoiceDistribution = std::vector<std::pair<std::string, Rational>>;

class StrategyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite-memory, possibly randomized strategy. choice(m, s) gives the action
/// distribution in state s with memory m; after an action a leads to s', the
/// memory becomes next_memory(m, a, s').
///
/// Update rules are keyed by (memory, observed successor). A rule may also be
/// refined per action taken, which randomized strategies need whenever two
/// actions can reach the same successor with different weights. The state key
/// "*" matches any successor without a more specific rule.
class MooreStrategy {
 public:
  static constexpr std::string_view any_state = "*";

  MooreStrategy(std::vector<std::string> memory_names, MemoryIndex initial_memory);

  std::size_t memory_count() const { return memory_names_.size(); }
  const std::vector<std::string>& memory_names() const { return memory_names_; }
  const std::string& memory_name(MemoryIndex m) const { return memory_names_.at(m); }
  std::optional<MemoryIndex> find_memory(std::string_view name) const;
  MemoryIndex initial_memory() const { return initial_memory_; }

  /// Normalizes ordering; throws StrategyError unless probabilities are
  /// positive and sum to exactly 1.
  void set_choice(MemoryIndex m, std::string state, ChoiceDistribution distribution);
  void set_pure_choice(MemoryIndex m, std::string state, std::string action);
  void set_update(MemoryIndex m, std::string successor, MemoryIndex next);
  void set_update(MemoryIndex m, std::string successor, std::string action, MemoryIndex next);

  const ChoiceDistribution* choice(MemoryIndex m, std::string_view state) const;
  std::optional<MemoryIndex> next_memory(MemoryIndex m, std::string_view action,
                                         std::string_view successor) const;

  bool is_pure() const;

  struct UpdateRule {
    std::optional<MemoryIndex> any_action;
    std::map<std::string, MemoryIndex> by_action;
    friend bool operator==(const UpdateRule&, const UpdateRule&) = default;
  };
  using Key = std::pair<MemoryIndex, std::string>;
  const std::map<Key, ChoiceDistribution>& choices() const { return choices_; }
  const std::map<Key, UpdateRule>& updates() const { return updates_; }

  friend bool operator==(const MooreStrategy&, const MooreStrategy&) = default;

 private:
  void check_memory(MemoryIndex m) const;

  std::vector<std::string> memory_names_;
  MemoryIndex initial_memory_;
  std::map<Key, ChoiceDistribution> choices_;
  std::map<Key, UpdateRule> updates_;
};

/// Single-step view of a strategy at (memory, state).
struct StrategyStep {
  const ChoiceDistribution& distribution;
  std::function<std::optional<MemoryIndex>(std::string_view action, std::string_view successor)> next;
};

/// Throws StrategyError if the strategy has no choice at (memory, state).
StrategyStep strategy_step(const MooreStrategy& strategy, MemoryIndex memory, std::string_view state);

/// Pure memoryless strategy from a per-state action choice.
MooreStrategy memoryless_strategy(std::span<const std::string> states, std::span<const std::string> actions);

/// Checks that every choice refers to known states and available actions.
std::vector<std::string> check_compatible(const MooreStrategy& strategy, const WeightedMdp& mdp);
std::vector<std::string> check_compatible(const MooreStrategy& strategy, const WeightedGame& game);

}  // namespace qsp
