#include "support.hpp"

#include <functional>
#include <map>
#include <queue>
#include <set>

namespace qsp::test {

Rational q(const char* text) { return parse_rational(text); }

namespace {

using ActionEntry = MdpDescription::ActionEntry;

ActionEntry act(std::string name, std::string source, WeightVector w,
                std::vector<std::pair<std::string, const char*>> dist) {
  ActionEntry a{std::move(name), std::move(source), std::move(w), {}};
  for (auto& [t, p] : dist) a.distribution.emplace_back(t, q(p));
  return a;
}

GameDescription::EdgeEntry edge(std::string name, std::string source, std::string target, WeightVector w) {
  return {std::move(name), std::move(source), std::move(target), std::move(w)};
}

MooreStrategy memoryless(const std::vector<std::pair<std::string, std::string>>& choice) {
  std::vector<std::string> states, actions;
  for (const auto& [s, a] : choice) {
    states.push_back(s);
    actions.push_back(a);
  }
  return memoryless_strategy(states, actions);
}

const std::vector<std::pair<std::string, std::string>> commuting_tail = {
    {"waiting room", "go back"}, {"train", "relax"},  {"light traffic", "drive"},
    {"medium traffic", "drive"}, {"heavy traffic", "drive"}, {"work", "stay"}};

}  // namespace

WeightedMdp commuting() {
  MdpDescription d;
  d.dimensions = 1;
  d.dimension_names = {"time"};
  d.states = {"home", "waiting room", "train", "light traffic", "medium traffic", "heavy traffic", "work"};
  d.initial = "home";
  d.actions = {
      act("railway", "home", {2}, {{"waiting room", "0.1"}, {"train", "0.9"}}),
      act("car", "home", {1}, {{"light traffic", "0.2"}, {"medium traffic", "0.7"}, {"heavy traffic", "0.1"}}),
      act("bike", "home", {45}, {{"work", "1"}}),
      act("wait", "waiting room", {3}, {{"waiting room", "0.1"}, {"train", "0.9"}}),
      act("go back", "waiting room", {2}, {{"home", "1"}}),
      act("relax", "train", {35}, {{"work", "1"}}),
      act("drive", "light traffic", {20}, {{"work", "1"}}),
      act("drive", "medium traffic", {30}, {{"work", "1"}}),
      act("drive", "heavy traffic", {70}, {{"work", "1"}}),
      act("stay", "work", {1}, {{"work", "1"}}),
  };
  return validate_mdp(d);
}

WeightedMdp bus_taxi() {
  MdpDescription d;
  d.dimensions = 2;
  d.dimension_names = {"time", "cost"};
  d.states = {"home", "work", "car wreck"};
  d.initial = "home";
  d.actions = {
      act("bus", "home", {30, 3}, {{"work", "0.7"}, {"home", "0.3"}}),
      act("taxi", "home", {10, 20}, {{"work", "0.99"}, {"car wreck", "0.01"}}),
      act("stay", "work", {1, 1}, {{"work", "1"}}),
      act("stay", "car wreck", {1, 1}, {{"car wreck", "1"}}),
  };
  return validate_mdp(d);
}

WeightedGame lawnmower() {
  GameDescription d;
  d.dimensions = 3;
  d.dimension_names = {"battery", "fuel", "time"};
  d.player1 = {"cloudy", "sunny", "grass cutting", "use fuel"};
  d.player2 = {"base", "cat attack"};
  d.initial = "base";
  d.edges = {
      edge("cloudy", "base", "cloudy", {0, 0, 0}),
      edge("sunny", "base", "sunny", {0, 0, 0}),
      edge("mow battery", "cloudy", "grass cutting", {-1, 0, 5}),
      edge("switch to fuel", "cloudy", "use fuel", {0, 0, 0}),
      edge("rest", "cloudy", "base", {0, 2, 20}),
      edge("mow fuel", "use fuel", "grass cutting", {0, -2, 5}),
      edge("fast mow", "sunny", "cat attack", {-1, -1, 2}),
      edge("slow mow", "sunny", "grass cutting", {0, 0, 10}),
      edge("rest", "sunny", "base", {2, 2, 20}),
      edge("cat", "cat attack", "base", {0, 0, 40}),
      edge("no cat", "cat attack", "grass cutting", {0, 0, 0}),
      edge("go back", "grass cutting", "base", {0, 0, 0}),
  };
  return validate_game(d);
}

WeightedGame shortest_path_graph() {
  GameDescription d;
  d.dimensions = 1;
  d.dimension_names = {"length"};
  d.player1 = {"A", "B", "C", "D", "E"};
  d.initial = "A";
  d.edges = {
      edge("to B", "A", "B", {30}), edge("to C", "A", "C", {10}), edge("to B", "C", "B", {20}),
      edge("to E", "C", "E", {5}),  edge("to B", "E", "B", {10}), edge("to D", "E", "D", {20}),
      edge("to D", "B", "D", {5}),  edge("stay", "D", "D", {1}),
  };
  return validate_game(d);
}

TargetSet targets(const WeightedMdp& mdp, std::vector<std::string> names) { return TargetSet(mdp.states(), names); }
TargetSet targets(const WeightedGame& game, std::vector<std::string> names) { return TargetSet(game.states(), names); }

MooreStrategy car_strategy() {
  auto c = commuting_tail;
  c.emplace_back("home", "car");
  return memoryless(c);
}

MooreStrategy bike_strategy() {
  auto c = commuting_tail;
  c.emplace_back("home", "bike");
  return memoryless(c);
}

MooreStrategy train_wait_strategy() {
  auto c = commuting_tail;
  c.front().second = "wait";
  c.emplace_back("home", "railway");
  return memoryless(c);
}

MooreStrategy bwc_wait_strategy() {
  // delay k: the train has been delayed k times
  MooreStrategy s({"train", "delay 1", "delay 2", "delay 3", "delay 4", "bike"}, 0);
  s.set_pure_choice(0, "home", "railway");
  for (MemoryIndex m = 0; m <= 3; ++m) {
    s.set_pure_choice(m, "train", "relax");
    s.set_pure_choice(m, "work", "stay");
    if (m > 0) s.set_pure_choice(m, "waiting room", "wait");
    s.set_update(m, "waiting room", m + 1);
    s.set_update(m, "*", m);
  }
  s.set_pure_choice(4, "waiting room", "go back");
  s.set_update(4, "*", 5);
  s.set_pure_choice(5, "home", "bike");
  s.set_pure_choice(5, "work", "stay");
  s.set_update(5, "*", 5);
  return s;
}

MooreStrategy bus_once_then_taxi() {
  MooreStrategy s({"bus", "taxi"}, 0);
  for (MemoryIndex m : {0, 1}) {
    s.set_pure_choice(m, "home", m == 0 ? "bus" : "taxi");
    s.set_pure_choice(m, "work", "stay");
    s.set_pure_choice(m, "car wreck", "stay");
    s.set_update(m, "*", m);
  }
  s.set_update(0, "home", 1);
  return s;
}

MooreStrategy coin_strategy() {
  MooreStrategy s({"m0"}, 0);
  s.set_choice(0, "home", {{"bus", q("3/5")}, {"taxi", q("2/5")}});
  s.set_pure_choice(0, "work", "stay");
  s.set_pure_choice(0, "car wreck", "stay");
  s.set_update(0, "*", 0);
  return s;
}

MooreStrategy lawnmower_controller() {
  enum : MemoryIndex { empty, empty_cloudy, fuel, using_fuel };
  MooreStrategy s({"fuel empty", "fuel empty, cloudy", "fuel 2", "fuel 2, using"}, empty);
  s.set_pure_choice(empty, "cloudy", "rest");
  s.set_pure_choice(empty, "sunny", "slow mow");
  s.set_pure_choice(empty, "grass cutting", "go back");
  s.set_pure_choice(empty, "use fuel", "mow fuel");
  s.set_pure_choice(empty_cloudy, "cloudy", "rest");
  s.set_pure_choice(fuel, "cloudy", "switch to fuel");
  s.set_pure_choice(fuel, "sunny", "slow mow");
  s.set_pure_choice(fuel, "grass cutting", "go back");
  s.set_pure_choice(fuel, "use fuel", "mow fuel");
  s.set_pure_choice(using_fuel, "use fuel", "mow fuel");
  s.set_update(empty, "cloudy", empty_cloudy);
  s.set_update(empty, "*", empty);
  s.set_update(empty_cloudy, "base", fuel);
  s.set_update(empty_cloudy, "*", empty_cloudy);
  s.set_update(fuel, "use fuel", using_fuel);
  s.set_update(fuel, "*", fuel);
  s.set_update(using_fuel, "grass cutting", empty);
  s.set_update(using_fuel, "*", using_fuel);
  return s;
}

MooreStrategy lawnmower_fast_mow() {
  return memoryless({{"cloudy", "mow battery"}, {"sunny", "fast mow"}, {"grass cutting", "go back"}, {"use fuel", "mow fuel"}});
}

std::string fixture(const std::string& name) { return std::string(QSP_FIXTURE_DIR) + "/" + name; }

// ---------------------------------------------------------------------------

WeightedMdp random_mdp(std::mt19937_64& rng, const MdpShape& shape) {
  auto uniform = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
  const auto n = static_cast<std::size_t>(uniform(2, static_cast<std::int64_t>(shape.max_states)));
  MdpDescription d;
  d.dimension_names = {"w"};
  for (std::size_t i = 0; i < n; ++i) d.states.push_back("s" + std::to_string(i));
  d.initial = "s0";
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto k = uniform(1, static_cast<std::int64_t>(shape.max_actions));
    for (std::int64_t a = 0; a < k; ++a) {
      ActionEntry entry{"a" + std::to_string(a), d.states[i], {uniform(1, shape.max_weight)}, {}};
      auto m = std::min<std::int64_t>({uniform(1, 3), static_cast<std::int64_t>(n), shape.denominator});
      std::vector<std::size_t> pool(n);
      for (std::size_t j = 0; j < n; ++j) pool[j] = j;
      std::shuffle(pool.begin(), pool.end(), rng);
      // split the denominator into m positive parts
      std::vector<std::int64_t> cuts{0, shape.denominator};
      std::set<std::int64_t> inner;
      while (static_cast<std::int64_t>(inner.size()) < m - 1) inner.insert(uniform(1, shape.denominator - 1));
      cuts.insert(cuts.end() - 1, inner.begin(), inner.end());
      for (std::int64_t j = 0; j < m; ++j)
        entry.distribution.emplace_back(d.states[pool[static_cast<std::size_t>(j)]],
                                        Rational(cuts[static_cast<std::size_t>(j) + 1] - cuts[static_cast<std::size_t>(j)],
                                                 shape.denominator));
      for (auto& [t, p] : entry.distribution) p.canonicalize();
      d.actions.push_back(std::move(entry));
    }
  }
  d.actions.push_back({"stay", d.states.back(), {1}, {{d.states.back(), Rational(1)}}});
  return validate_mdp(d);
}

TargetSet last_state(const WeightedMdp& mdp) {
  std::vector<bool> mask(mdp.state_count(), false);
  mask.back() = true;
  return TargetSet(mask);
}

RandomArena random_arena(std::mt19937_64& rng, std::size_t max_nodes, std::int64_t max_abs, std::size_t dims) {
  auto uniform = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
  const auto n = static_cast<std::size_t>(uniform(2, static_cast<std::int64_t>(max_nodes)));
  GameDescription d;
  d.dimensions = dims;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("v" + std::to_string(i));
    (uniform(0, 1) ? d.player1 : d.player2).push_back(names.back());
  }
  d.initial = "v0";
  std::vector<std::pair<std::string, std::string>> choice;
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = uniform(1, 3);
    for (std::int64_t e = 0; e < k; ++e) {
      WeightVector w;
      for (std::size_t j = 0; j < dims; ++j) w.push_back(uniform(-max_abs, max_abs));
      d.edges.push_back({"e" + std::to_string(e), names[i], names[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(n) - 1))], w});
    }
    if (std::find(d.player1.begin(), d.player1.end(), names[i]) != d.player1.end())
      choice.emplace_back(names[i], "e" + std::to_string(uniform(0, k - 1)));
  }
  return {validate_game(d), memoryless(choice)};
}

// ---------------------------------------------------------------------------

namespace oracle {

std::vector<Policy> all_policies(const WeightedMdp& mdp) {
  std::vector<Policy> out;
  Policy p(mdp.state_count(), 0);
  while (true) {
    out.push_back(p);
    std::size_t s = 0;
    while (s < p.size() && ++p[s] == mdp.actions_at(s).size()) p[s++] = 0;
    if (s == p.size()) break;
  }
  return out;
}

MooreStrategy to_strategy(const WeightedMdp& mdp, const Policy& policy) {
  std::vector<std::string> actions;
  for (StateIndex s = 0; s < mdp.state_count(); ++s) actions.push_back(mdp.action(mdp.actions_at(s)[policy[s]]).name);
  return memoryless_strategy(mdp.states(), actions);
}

namespace {

const Action& chosen(const WeightedMdp& mdp, const Policy& policy, StateIndex s) {
  return mdp.action(mdp.actions_at(s)[policy[s]]);
}

/// Non-target states reachable from the initial state without crossing the target.
std::vector<StateIndex> transient(const WeightedMdp& mdp, const TargetSet& target, const Policy& policy) {
  std::vector<bool> seen(mdp.state_count(), false);
  std::vector<StateIndex> stack{mdp.initial()}, out;
  seen[mdp.initial()] = true;
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    if (target.contains(s)) continue;
    out.push_back(s);
    for (const auto& o : chosen(mdp, policy, s).outcomes)
      if (!seen[o.target]) {
        seen[o.target] = true;
        stack.push_back(o.target);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::optional<Rational> policy_expectation(const WeightedMdp& mdp, const TargetSet& target, std::size_t dim,
                                           const Policy& policy) {
  if (target.contains(mdp.initial())) return Rational(0);
  // infinite as soon as some reachable state cannot reach the target
  const auto states = transient(mdp, target, policy);
  for (auto s : states) {
    std::set<StateIndex> seen{s};
    std::vector<StateIndex> stack{s};
    bool reaches = false;
    while (!stack.empty() && !reaches) {
      auto u = stack.back();
      stack.pop_back();
      for (const auto& o : chosen(mdp, policy, u).outcomes) {
        if (target.contains(o.target)) reaches = true;
        if (seen.insert(o.target).second) stack.push_back(o.target);
      }
    }
    if (!reaches) return std::nullopt;
  }
  const auto n = states.size();
  std::map<StateIndex, std::size_t> col;
  for (std::size_t i = 0; i < n; ++i) col[states[i]] = i;
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = chosen(mdp, policy, states[i]);
    m[i][i] = 1;
    m[i][n] = a.weight[dim];
    for (const auto& o : a.outcomes)
      if (!target.contains(o.target)) m[i][col.at(o.target)] -= o.probability;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (m[r][c] == 0) ++r;
    std::swap(m[r], m[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c] == 0) continue;
      Rational f = m[i][c] / m[c][c];
      for (std::size_t j = c; j <= n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  const auto i = col.at(mdp.initial());
  return Rational(m[i][n] / m[i][i]);
}

std::optional<std::int64_t> policy_worst_case(const WeightedMdp& mdp, const TargetSet& target, std::size_t dim,
                                              const Policy& policy) {
  std::map<StateIndex, std::int64_t> done;
  std::set<StateIndex> active;
  bool cyclic = false;
  std::function<std::int64_t(StateIndex)> longest = [&](StateIndex s) -> std::int64_t {
    if (target.contains(s)) return 0;
    if (auto it = done.find(s); it != done.end()) return it->second;
    if (!active.insert(s).second) {
      cyclic = true;
      return 0;
    }
    const auto& a = chosen(mdp, policy, s);
    std::int64_t best = 0;
    for (const auto& o : a.outcomes) best = std::max(best, a.weight[dim] + longest(o.target));
    active.erase(s);
    return done[s] = best;
  };
  const auto value = longest(mdp.initial());
  if (cyclic) return std::nullopt;
  return value;
}

std::optional<Rational> min_expectation(const WeightedMdp& mdp, const TargetSet& target, std::size_t dim) {
  std::optional<Rational> best;
  for (const auto& p : all_policies(mdp))
    if (auto v = policy_expectation(mdp, target, dim, p); v && (!best || *v < *best)) best = v;
  return best;
}

std::optional<std::int64_t> min_worst_case(const WeightedMdp& mdp, const TargetSet& target, std::size_t dim) {
  std::optional<std::int64_t> best;
  for (const auto& p : all_policies(mdp))
    if (auto v = policy_worst_case(mdp, target, dim, p); v && (!best || *v < *best)) best = v;
  return best;
}

Rational max_probability(const WeightedMdp& mdp, const TargetSet& target, std::size_t dim, std::int64_t bound) {
  std::map<std::pair<StateIndex, std::int64_t>, Rational> memo;
  std::function<Rational(StateIndex, std::int64_t)> f = [&](StateIndex s, std::int64_t spent) -> Rational {
    if (spent > bound) return 0;
    if (target.contains(s)) return 1;
    if (auto it = memo.find({s, spent}); it != memo.end()) return it->second;
    Rational best = 0;
    for (auto i : mdp.actions_at(s)) {
      const auto& a = mdp.action(i);
      Rational v = 0;
      for (const auto& o : a.outcomes) v += o.probability * f(o.target, spent + a.weight[dim]);
      best = std::max(best, v);
    }
    return memo[{s, spent}] = best;
  };
  return f(mdp.initial(), 0);
}

std::optional<Rational> max_probability_enumerated(const WeightedMdp& mdp, const TargetSet& target, std::size_t dim,
                                                   std::int64_t bound, std::size_t limit) {
  if (target.contains(mdp.initial())) return Rational(1);
  // nodes reachable under some policy
  std::vector<std::pair<StateIndex, std::int64_t>> nodes{{mdp.initial(), 0}};
  std::set<std::pair<StateIndex, std::int64_t>> seen(nodes.begin(), nodes.end());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (auto a : mdp.actions_at(nodes[i].first))
      for (const auto& o : mdp.action(a).outcomes) {
        std::pair next{o.target, nodes[i].second + mdp.action(a).weight[dim]};
        if (next.second <= bound && !target.contains(o.target) && seen.insert(next).second) nodes.push_back(next);
      }
  std::size_t count = 1;
  for (const auto& [s, _] : nodes) {
    count *= mdp.actions_at(s).size();
    if (count > limit) return std::nullopt;
  }
  std::map<std::pair<StateIndex, std::int64_t>, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;

  std::vector<std::size_t> choice(nodes.size(), 0);
  Rational best = 0;
  while (true) {
    std::vector<std::optional<Rational>> memo(nodes.size());
    std::function<Rational(StateIndex, std::int64_t)> f = [&](StateIndex s, std::int64_t spent) -> Rational {
      if (spent > bound) return 0;
      if (target.contains(s)) return 1;
      const auto i = index.at({s, spent});
      if (memo[i]) return *memo[i];
      const auto& a = mdp.action(mdp.actions_at(s)[choice[i]]);
      Rational v = 0;
      for (const auto& o : a.outcomes) v += o.probability * f(o.target, spent + a.weight[dim]);
      memo[i] = v;
      return v;
    };
    best = std::max(best, f(mdp.initial(), 0));
    std::size_t i = 0;
    while (i < nodes.size() && ++choice[i] == mdp.actions_at(nodes[i].first).size()) choice[i++] = 0;
    if (i == nodes.size()) break;
  }
  return best;
}

std::optional<Rational> min_safe_expectation(const WeightedMdp& mdp, const TargetSet& target, std::size_t dim,
                                             std::int64_t bound) {
  std::map<std::pair<StateIndex, std::int64_t>, bool> guarantee_memo;
  std::function<bool(StateIndex, std::int64_t)> guarantee = [&](StateIndex s, std::int64_t remaining) -> bool {
    if (remaining < 0) return false;
    if (target.contains(s)) return true;
    if (auto it = guarantee_memo.find({s, remaining}); it != guarantee_memo.end()) return it->second;
    bool ok = false;
    for (auto i : mdp.actions_at(s)) {
      const auto& a = mdp.action(i);
      bool all = true;
      for (const auto& o : a.outcomes) all = all && guarantee(o.target, remaining - a.weight[dim]);
      ok = ok || all;
    }
    return guarantee_memo[{s, remaining}] = ok;
  };
  if (!guarantee(mdp.initial(), bound)) return std::nullopt;

  std::map<std::pair<StateIndex, std::int64_t>, Rational> memo;
  std::function<Rational(StateIndex, std::int64_t)> value = [&](StateIndex s, std::int64_t spent) -> Rational {
    if (target.contains(s)) return 0;
    if (auto it = memo.find({s, spent}); it != memo.end()) return it->second;
    std::optional<Rational> best;
    for (auto i : mdp.actions_at(s)) {
      const auto& a = mdp.action(i);
      bool safe = true;
      for (const auto& o : a.outcomes) safe = safe && guarantee(o.target, bound - spent - a.weight[dim]);
      if (!safe) continue;
      Rational v = a.weight[dim];
      for (const auto& o : a.outcomes) v += o.probability * value(o.target, spent + a.weight[dim]);
      if (!best || v < *best) best = v;
    }
    return memo[{s, spent}] = *best;
  };
  return value(mdp.initial(), 0);
}

std::vector<std::optional<std::int64_t>> dijkstra(const WeightedGame& game, const TargetSet& target, std::size_t dim) {
  const auto n = game.state_count();
  std::vector<std::vector<std::pair<StateIndex, std::int64_t>>> reverse(n);
  for (const auto& e : game.edges()) reverse[e.target].emplace_back(e.source, e.weight[dim]);
  std::vector<std::optional<std::int64_t>> dist(n);
  using Item = std::pair<std::int64_t, StateIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (StateIndex s = 0; s < n; ++s)
    if (target.contains(s)) {
      dist[s] = 0;
      queue.push({0, s});
    }
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d != *dist[v]) continue;
    for (auto [u, w] : reverse[v])
      if (!target.contains(u) && (!dist[u] || d + w < *dist[u])) {
        dist[u] = d + w;
        queue.push({d + w, u});
      }
  }
  return dist;
}

std::vector<Walk> simple_cycles(const ProductGraph& product) {
  std::vector<Walk> cycles;
  const auto n = product.size();
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<bool> on_path(n, false);
    Walk path;
    std::function<void(std::size_t)> extend = [&](std::size_t v) {
      on_path[v] = true;
      for (const auto& step : product.out(v)) {
        if (step.to == start) {
          path.push_back(step);
          cycles.push_back(path);
          path.pop_back();
        } else if (step.to > start && !on_path[step.to]) {
          path.push_back(step);
          extend(step.to);
          path.pop_back();
        }
      }
      on_path[v] = false;
    };
    extend(start);
  }
  return cycles;
}

Rational walk_sum(const ProductGraph& product, const Walk& walk, std::size_t dim) {
  Rational sum = 0;
  for (const auto& s : walk) sum += product.weight(s, dim);
  return sum;
}

Rational max_cycle_mean(const ProductGraph& product, std::size_t dim) {
  std::optional<Rational> best;
  for (const auto& c : simple_cycles(product)) {
    Rational mean = walk_sum(product, c, dim) / static_cast<long>(c.size());
    if (!best || mean > *best) best = mean;
  }
  return *best;
}

std::optional<std::int64_t> energy_credit(const ProductGraph& product, std::size_t dim) {
  for (const auto& c : simple_cycles(product))
    if (walk_sum(product, c, dim) < 0) return std::nullopt;
  std::int64_t lowest = 0;
  std::vector<bool> on_path(product.size(), false);
  std::function<void(std::size_t, std::int64_t)> extend = [&](std::size_t v, std::int64_t sum) {
    lowest = std::min(lowest, sum);
    on_path[v] = true;
    for (const auto& step : product.out(v))
      if (!on_path[step.to]) extend(step.to, sum + product.weight(step, dim));
    on_path[v] = false;
  };
  extend(product.initial(), 0);
  return -lowest;
}

bool buchi_holds(const ProductGraph& product, const TargetSet& accepting) {
  for (const auto& c : simple_cycles(product)) {
    bool visits = false;
    for (const auto& s : c) visits = visits || accepting.contains(product.node(s.from).state);
    if (!visits) return false;
  }
  return true;
}

}  // namespace oracle

}  // namespace qsp::test
