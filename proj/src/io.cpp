#include "qsp/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qsp/bwc.hpp"
#include "qsp/chain.hpp"
#include "qsp/multi_percentile.hpp"
#include "qsp/percentile.hpp"
#include "qsp/simulate.hpp"
#include "qsp/ssp.hpp"
#include "qsp/verifier.hpp"

namespace qsp {

namespace {

/// A JSON value together with its key path, for error messages.
class Field {
 public:
  Field(const Json& value, std::string path, const std::string& source)
      : value_(&value), path_(std::move(path)), source_(&source) {}

  const Json& json() const { return *value_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw IoError(*source_ + ": " + (path_.empty() ? "top level" : path_) + ": " + message);
  }

  Field at(const std::string& key) const {
    auto found = find(key);
    if (!found) fail("missing key \"" + key + "\"");
    return *found;
  }

  std::optional<Field> find(const std::string& key) const {
    require_object();
    auto it = value_->find(key);
    if (it == value_->end()) return std::nullopt;
    return Field(*it, path_.empty() ? key : path_ + "." + key, *source_);
  }

  Field at(std::size_t index) const { return Field((*value_)[index], path_ + "[" + std::to_string(index) + "]", *source_); }

  void only_keys(std::initializer_list<std::string_view> allowed) const {
    require_object();
    for (const auto& [key, _] : value_->items())
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail("unknown key \"" + key + "\"");
  }

  void require_object() const {
    if (!value_->is_object()) fail("expected an object");
  }

  std::size_t array_size() const {
    if (!value_->is_array()) fail("expected an array");
    return value_->size();
  }

  std::string string() const {
    if (!value_->is_string()) fail("expected a string");
    return value_->get<std::string>();
  }

  std::int64_t integer() const {
    if (!value_->is_number_integer()) fail("expected an integer");
    return value_->get<std::int64_t>();
  }

  std::int64_t natural() const {
    auto v = integer();
    if (v < 0) fail("expected a non-negative integer");
    return v;
  }

  bool boolean() const {
    if (!value_->is_boolean()) fail("expected true or false");
    return value_->get<bool>();
  }

  /// Integer, or a string holding an integer, "p/q" or an exact decimal.
  Rational rational() const {
    if (value_->is_number_integer()) return Rational(value_->get<long>());
    if (value_->is_number_float()) fail("write non-integer numbers as strings (\"0.7\" or \"7/10\") to keep them exact");
    if (!value_->is_string()) fail("expected a rational number");
    try {
      return parse_rational(value_->get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < array_size(); ++i) out.push_back(at(i).string());
    return out;
  }

  /// A single string or an array of strings.
  std::vector<std::string> string_list() const {
    if (value_->is_string()) return {string()};
    return strings();
  }

 private:
  const Json* value_;
  std::string path_;
  const std::string* source_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

WeightVector read_weight(const Field& f) {
  WeightVector w;
  for (std::size_t i = 0; i < f.array_size(); ++i) w.push_back(f.at(i).integer());
  return w;
}

Json weight_json(const WeightVector& w) { return Json(w); }

void put_exact(Json& doc, const std::string& key, const Rational& value) {
  doc[key] = to_string(value);
  doc[key + "_decimal"] = to_decimal(value);
}

void put_exact(Json& doc, const std::string& key, const ExtendedRational& value) {
  if (value.is_finite()) {
    put_exact(doc, key, value.value());
  } else {
    doc[key] = "infinite";
  }
}

void put_natural(Json& doc, const std::string& key, const ExtendedNatural& value) {
  if (value.is_finite())
    doc[key] = std::to_string(value.value());
  else
    doc[key] = "infinite";
}

template <class M>
TargetSet read_target(const Field& f, const M& model) {
  try {
    const auto names = f.string_list();
    return TargetSet(model.states(), names);
  } catch (const ModelError& e) {
    f.fail(e.what());
  }
}

template <class M>
std::size_t read_dimension(const std::optional<Field>& f, const M& model, const Field& parent) {
  if (!f) {
    if (model.dimensions() == 1) return 0;
    parent.fail("missing key \"dimension\" (the model has " + std::to_string(model.dimensions()) + " dimensions)");
  }
  const auto name = f->string();
  auto d = model.find_dimension(name);
  if (!d) f->fail("unknown dimension '" + name + "'");
  return *d;
}

std::string verdict_name(bool yes) { return yes ? "yes" : "no"; }

template <class M, class V>
Json state_values_json(const M& model, const std::vector<V>& values) {
  Json out = Json::object();
  for (StateIndex s = 0; s < model.state_count(); ++s) out[model.state_name(s)] = to_string(values[s]);
  return out;
}

const WeightedMdp& require_mdp(const Model& model, const Field& query, const std::string& problem) {
  if (!std::holds_alternative<WeightedMdp>(model)) query.fail(problem + " needs an MDP model");
  return std::get<WeightedMdp>(model);
}

const MooreStrategy& require_strategy(const MooreStrategy* strategy, const Field& query, const std::string& problem) {
  if (!strategy) query.fail(problem + " needs a strategy file");
  return *strategy;
}

template <class M>
void require_compatible(const MooreStrategy& strategy, const M& model, const std::string& source) {
  auto issues = check_compatible(strategy, model);
  if (issues.empty()) return;
  std::string message = source + ": strategy does not fit the model";
  for (const auto& i : issues) message += "\n  " + i;
  throw IoError(message);
}

QueryResult with_strategy(int code, Json doc, MooreStrategy strategy) {
  doc["strategy"] = strategy_to_json(strategy);
  return {code, std::move(doc), std::move(strategy)};
}

// ---------------------------------------------------------------------------
// Problems

QueryResult run_s1(const WeightedMdp& mdp, const Field& q) {
  q.only_keys({"problem", "target", "dimension", "l"});
  const auto target = read_target(q.at("target"), mdp);
  const auto dim = read_dimension(q.find("dimension"), mdp, q);
  auto solution = solve_expectation(mdp, target, dim);
  Json doc{{"problem", "S1"}};
  put_exact(doc, "value", solution.value);
  doc["state_values"] = state_values_json(mdp, solution.state_values);
  int code = exit_yes;
  if (auto l = q.find("l")) {
    const bool yes = solution.value <= ExtendedRational(l->rational());
    doc["verdict"] = verdict_name(yes);
    code = yes ? exit_yes : exit_no;
  }
  return with_strategy(code, std::move(doc), std::move(solution.strategy));
}

QueryResult run_s2(const WeightedMdp& mdp, const Field& q) {
  q.only_keys({"problem", "target", "dimension", "l", "alpha"});
  const auto target = read_target(q.at("target"), mdp);
  const auto dim = read_dimension(q.find("dimension"), mdp, q);
  auto solution = solve_percentile(mdp, target, dim, q.at("l").natural(), q.at("alpha").rational());
  Json doc{{"problem", "S2"}, {"verdict", verdict_name(solution.satisfied)}};
  put_exact(doc, "probability", solution.probability);
  return with_strategy(solution.satisfied ? exit_yes : exit_no, std::move(doc), std::move(solution.strategy));
}

template <class M>
QueryResult run_s3(const M& model, const Field& q) {
  q.only_keys({"problem", "target", "dimension", "l"});
  const auto target = read_target(q.at("target"), model);
  const auto dim = read_dimension(q.find("dimension"), model, q);
  auto solution = solve_worstcase(model, target, dim);
  Json doc{{"problem", "S3"}};
  put_natural(doc, "value", solution.value);
  doc["state_values"] = state_values_json(model, solution.state_values);
  int code = exit_yes;
  if (auto l = q.find("l")) {
    const bool yes = solution.value <= ExtendedNatural(l->natural());
    doc["verdict"] = verdict_name(yes);
    code = yes ? exit_yes : exit_no;
  }
  return with_strategy(code, std::move(doc), std::move(solution.strategy));
}

QueryResult run_s4(const WeightedMdp& mdp, const Field& q) {
  q.only_keys({"problem", "target", "dimension", "l1", "l2"});
  const auto target = read_target(q.at("target"), mdp);
  const auto dim = read_dimension(q.find("dimension"), mdp, q);
  auto solution = solve_bwc(mdp, target, dim, q.at("l1").natural(), q.at("l2").rational());
  Json doc{{"problem", "S4"}};
  put_natural(doc, "initial_worst_case", solution.initial_worst_case);
  if (solution.verdict == BwcVerdict::infeasible_worst_case) {
    doc["verdict"] = "infeasible";
    return {exit_error, std::move(doc), std::nullopt};
  }
  const bool yes = solution.verdict == BwcVerdict::yes;
  doc["verdict"] = verdict_name(yes);
  put_exact(doc, "expectation", *solution.expectation);
  doc["worst_case"] = std::to_string(*solution.certified_worst_case);
  return with_strategy(yes ? exit_yes : exit_no, std::move(doc), std::move(*solution.strategy));
}

std::vector<PercentileConstraint> read_constraints(const WeightedMdp& mdp, const Field& list) {
  std::vector<PercentileConstraint> out;
  for (std::size_t i = 0; i < list.array_size(); ++i) {
    const auto c = list.at(i);
    c.only_keys({"target", "dimension", "l", "alpha"});
    out.push_back({read_target(c.at("target"), mdp), read_dimension(c.find("dimension"), mdp, c), c.at("l").natural(),
                   c.at("alpha").rational()});
  }
  if (out.empty()) list.fail("at least one constraint is required");
  return out;
}

QueryResult run_s5(const WeightedMdp& mdp, const Field& q) {
  q.only_keys({"problem", "constraints"});
  const auto constraints = read_constraints(mdp, q.at("constraints"));
  auto solution = solve_multi_percentile(mdp, constraints);
  Json doc{{"problem", "S5"}, {"verdict", verdict_name(solution.satisfied)}};
  if (!solution.satisfied) return {exit_no, std::move(doc), std::nullopt};
  Json achieved = Json::array(), decimal = Json::array();
  for (const auto& p : solution.achieved) {
    achieved.push_back(to_string(p));
    decimal.push_back(to_decimal(p));
  }
  doc["achieved"] = achieved;
  doc["achieved_decimal"] = decimal;
  return with_strategy(exit_yes, std::move(doc), std::move(*solution.strategy));
}

ObjectiveSpec read_objectives(const WeightedGame& game, const Field& f) {
  f.only_keys({"energy", "buchi", "meanpayoff"});
  ObjectiveSpec spec;
  if (auto energy = f.find("energy"))
    for (std::size_t i = 0; i < energy->array_size(); ++i) {
      const auto name = energy->at(i).string();
      auto d = game.find_dimension(name);
      if (!d) energy->at(i).fail("unknown dimension '" + name + "'");
      spec.energy_dimensions.push_back(*d);
    }
  if (auto buchi = f.find("buchi")) spec.buchi = read_target(*buchi, game);
  if (auto mp = f.find("meanpayoff")) {
    mp->only_keys({"dimension", "threshold", "strict"});
    MeanPayoffObjective objective{read_dimension(mp->find("dimension"), game, *mp), mp->at("threshold").rational()};
    if (auto strict = mp->find("strict")) objective.strict = strict->boolean();
    spec.meanpayoff = objective;
  }
  if (spec.energy_dimensions.empty() && !spec.buchi && !spec.meanpayoff) f.fail("no objective given");
  return spec;
}

Json walk_json(const ProductGraph& product, const Walk& walk, const MooreStrategy& strategy) {
  return {{"steps", walk.size()}, {"path", describe(product, walk, strategy)}};
}

QueryResult run_verify(const WeightedGame& game, const MooreStrategy& strategy, const Field& objectives,
                       const std::string& source) {
  require_compatible(strategy, game, source);
  const auto spec = read_objectives(game, objectives);
  const auto report = verify(game, strategy, spec);
  const auto product = build_product(game, strategy);
  Json doc{{"problem", "verify"}, {"verdict", report.passed ? "pass" : "fail"}, {"product_nodes", report.product_nodes}};
  Json energy = Json::array();
  for (const auto& e : report.energy) {
    Json entry{{"dimension", game.dimension_names()[e.dimension]}, {"holds", e.credit.has_value()}};
    if (e.credit) {
      entry["initial_credit"] = *e.credit;
      if (!e.witness.empty()) entry["lowest_prefix"] = walk_json(product, e.witness, strategy);
    } else {
      entry["initial_credit"] = nullptr;
      entry["negative_cycle"] = walk_json(product, e.witness, strategy);
    }
    energy.push_back(std::move(entry));
  }
  if (!energy.empty()) doc["energy"] = energy;
  if (report.buchi) {
    Json entry{{"holds", report.buchi->holds}};
    if (!report.buchi->holds) entry["avoiding_cycle"] = walk_json(product, report.buchi->witness, strategy);
    doc["buchi"] = entry;
  }
  if (report.meanpayoff) {
    Json entry{{"holds", report.meanpayoff->holds}};
    put_exact(entry, "max_mean", report.meanpayoff->max_mean);
    entry["cycle"] = walk_json(product, report.meanpayoff->witness, strategy);
    doc["meanpayoff"] = entry;
  }
  return {report.passed ? exit_yes : exit_no, std::move(doc), std::nullopt};
}

QueryResult run_simulate(const WeightedMdp& mdp, const MooreStrategy& strategy, const Field& q,
                         const std::string& source) {
  q.only_keys({"problem", "runs", "seed", "horizon", "estimators"});
  require_compatible(strategy, mdp, source);
  SimConfig config;
  config.runs = static_cast<std::uint64_t>(q.at("runs").natural());
  config.seed = static_cast<std::uint64_t>(q.at("seed").natural());
  if (auto h = q.find("horizon")) config.horizon = static_cast<std::uint64_t>(h->natural());
  const auto list = q.at("estimators");
  for (std::size_t i = 0; i < list.array_size(); ++i) {
    const auto e = list.at(i);
    e.only_keys({"kind", "target", "dimension", "l", "label"});
    const auto kind = e.at("kind").string();
    Estimator est{Estimator::Kind::expectation, read_target(e.at("target"), mdp), read_dimension(e.find("dimension"), mdp, e),
                  0, ""};
    if (kind == "probability") {
      est.kind = Estimator::Kind::probability;
      est.bound = e.at("l").natural();
    } else if (kind != "expectation") {
      e.at("kind").fail("expected \"expectation\" or \"probability\"");
    }
    est.label = e.find("label") ? e.at("label").string() : kind + " #" + std::to_string(i);
    config.estimators.push_back(std::move(est));
  }
  const auto report = simulate(mdp, strategy, config);
  Json doc{{"problem", "simulate"}, {"runs", report.runs}, {"seed", report.seed}, {"horizon", config.horizon}};
  Json estimates = Json::array();
  for (const auto& e : report.estimates)
    estimates.push_back({{"label", e.label},
                         {"mean", e.mean},
                         {"stddev", e.stddev},
                         {"ci95", {e.ci_low, e.ci_high}},
                         {"samples", e.samples},
                         {"censored", e.censored}});
  doc["estimates"] = estimates;
  return {exit_yes, std::move(doc), std::nullopt};
}

QueryResult evaluate_mdp(const WeightedMdp& mdp, const MooreStrategy& strategy, const Field& spec,
                         const std::string& source) {
  spec.only_keys({"problem", "measures"});
  require_compatible(strategy, mdp, source);
  const auto chain = induce_chain(mdp, strategy);
  const auto list = spec.at("measures");
  Json results = Json::array();
  for (std::size_t i = 0; i < list.array_size(); ++i) {
    const auto m = list.at(i);
    m.only_keys({"kind", "target", "dimension", "l"});
    const auto kind = m.at("kind").string();
    const auto target = read_target(m.at("target"), mdp);
    Json entry{{"kind", kind}};
    if (kind == "reach") {
      put_exact(entry, "value", reach_probability(chain, target));
    } else {
      const auto dim = read_dimension(m.find("dimension"), mdp, m);
      entry["dimension"] = mdp.dimension_names()[dim];
      if (kind == "expectation") {
        put_exact(entry, "value", expected_truncated_sum(chain, target, dim));
      } else if (kind == "probability") {
        const auto l = m.at("l").natural();
        entry["l"] = l;
        put_exact(entry, "value", prob_ts_leq(chain, target, dim, l));
      } else if (kind == "worst_case") {
        put_natural(entry, "value", worst_case_truncated_sum(chain, target, dim));
      } else {
        m.at("kind").fail("expected one of \"expectation\", \"probability\", \"worst_case\", \"reach\"");
      }
    }
    results.push_back(std::move(entry));
  }
  Json doc{{"problem", "evaluate"}, {"chain_nodes", chain.size()}, {"results", results}};
  return {exit_yes, std::move(doc), std::nullopt};
}

}  // namespace

// ---------------------------------------------------------------------------
// JSON text

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto offset = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset ? offset - 1 : 0), '\n');
    std::string what = e.what();
    if (auto cut = what.find("syntax error"); cut != std::string::npos) what = what.substr(cut);
    throw IoError(source + ":" + std::to_string(line) + ": " + what);
  }
}

Json read_json_file(const std::filesystem::path& path) { return parse_json(read_file(path), path.string()); }

// ---------------------------------------------------------------------------
// Models

Model model_from_json(const Json& document, const std::string& source) {
  const Field root(document, "", source);
  const auto type = root.at("type").string();
  const auto dims_field = root.find("dimensions");
  const std::size_t dimensions = dims_field ? static_cast<std::size_t>(dims_field->natural()) : 1;
  std::vector<std::string> dimension_names;
  if (auto names = root.find("dimension_names")) dimension_names = names->strings();
  const auto states = root.at("states").strings();
  const auto initial = root.at("initial").string();

  try {
    if (type == "mdp") {
      root.only_keys({"type", "dimensions", "dimension_names", "states", "initial", "actions"});
      MdpDescription raw{dimensions, dimension_names, states, initial, {}};
      const auto actions = root.at("actions");
      for (std::size_t i = 0; i < actions.array_size(); ++i) {
        const auto a = actions.at(i);
        a.only_keys({"name", "source", "weight", "dist"});
        MdpDescription::ActionEntry entry{a.at("name").string(), a.at("source").string(), read_weight(a.at("weight")), {}};
        const auto dist = a.at("dist");
        dist.require_object();
        for (const auto& [target, _] : dist.json().items()) entry.distribution.emplace_back(target, dist.at(target).rational());
        raw.actions.push_back(std::move(entry));
      }
      return validate_mdp(raw);
    }
    if (type == "game") {
      root.only_keys({"type", "dimensions", "dimension_names", "states", "initial", "players", "edges"});
      GameDescription raw{dimensions, dimension_names, {}, {}, initial, {}};
      const auto players = root.at("players");
      players.require_object();
      for (const auto& [state, _] : players.json().items())
        if (std::find(states.begin(), states.end(), state) == states.end())
          players.fail("'" + state + "' is not a declared state");
      for (const auto& s : states) {
        auto owner = players.find(s);
        if (!owner) players.fail("no player given for state '" + s + "'");
        const auto p = owner->integer();
        if (p == 1)
          raw.player1.push_back(s);
        else if (p == 2)
          raw.player2.push_back(s);
        else
          owner->fail("player must be 1 or 2");
      }
      const auto edges = root.at("edges");
      for (std::size_t i = 0; i < edges.array_size(); ++i) {
        const auto e = edges.at(i);
        e.only_keys({"name", "source", "target", "weight"});
        raw.edges.push_back({e.find("name") ? e.at("name").string() : std::string(), e.at("source").string(),
                             e.at("target").string(), read_weight(e.at("weight"))});
      }
      return validate_game(raw);
    }
  } catch (const ModelError& e) {
    std::string message = source + ": invalid model";
    for (const auto& issue : e.issues()) message += "\n  " + issue;
    throw IoError(message);
  }
  root.at("type").fail("expected \"mdp\" or \"game\"");
}

Json model_to_json(const WeightedMdp& mdp) {
  Json actions = Json::array();
  for (StateIndex s = 0; s < mdp.state_count(); ++s)
    for (auto i : mdp.actions_at(s)) {
      const auto& a = mdp.action(i);
      Json dist = Json::object();
      for (const auto& o : a.outcomes) dist[mdp.state_name(o.target)] = to_string(o.probability);
      actions.push_back({{"name", a.name}, {"source", mdp.state_name(a.source)}, {"weight", weight_json(a.weight)}, {"dist", dist}});
    }
  return {{"type", "mdp"},
          {"dimensions", mdp.dimensions()},
          {"dimension_names", mdp.dimension_names()},
          {"states", mdp.states()},
          {"initial", mdp.state_name(mdp.initial())},
          {"actions", actions}};
}

Json model_to_json(const WeightedGame& game) {
  Json players = Json::object();
  Json edges = Json::array();
  for (StateIndex s = 0; s < game.state_count(); ++s) {
    players[game.state_name(s)] = game.owner(s) == Player::one ? 1 : 2;
    for (auto i : game.edges_at(s)) {
      const auto& e = game.edge(i);
      edges.push_back({{"name", e.name},
                       {"source", game.state_name(e.source)},
                       {"target", game.state_name(e.target)},
                       {"weight", weight_json(e.weight)}});
    }
  }
  return {{"type", "game"},
          {"dimensions", game.dimensions()},
          {"dimension_names", game.dimension_names()},
          {"states", game.states()},
          {"initial", game.state_name(game.initial())},
          {"players", players},
          {"edges", edges}};
}

Json model_to_json(const Model& model) {
  return std::visit([](const auto& m) { return model_to_json(m); }, model);
}

Model load_model(const std::filesystem::path& path) {
  return model_from_json(read_json_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Strategies

MooreStrategy strategy_from_json(const Json& document, const std::string& source) {
  const Field root(document, "", source);
  root.only_keys({"memory_states", "initial_memory", "choice", "update"});
  const auto memory = root.at("memory_states").strings();
  auto index_of = [&](const Field& f) -> MemoryIndex {
    const auto name = f.string();
    auto it = std::find(memory.begin(), memory.end(), name);
    if (it == memory.end()) f.fail("unknown memory state '" + name + "'");
    return static_cast<MemoryIndex>(it - memory.begin());
  };
  try {
    MooreStrategy strategy(memory, index_of(root.at("initial_memory")));
    const auto choice = root.at("choice");
    choice.require_object();
    for (const auto& [m, _] : choice.json().items()) {
      const auto per_memory = choice.at(m);
      const auto mi = index_of(Field(Json(m), per_memory.path(), source));
      per_memory.require_object();
      for (const auto& [state, __] : per_memory.json().items()) {
        const auto c = per_memory.at(state);
        if (c.json().is_string()) {
          strategy.set_pure_choice(mi, state, c.string());
        } else {
          c.require_object();
          ChoiceDistribution dist;
          for (const auto& [action, ___] : c.json().items()) dist.emplace_back(action, c.at(action).rational());
          try {
            strategy.set_choice(mi, state, std::move(dist));
          } catch (const StrategyError& e) {
            c.fail(e.what());
          }
        }
      }
    }
    const auto update = root.at("update");
    update.require_object();
    for (const auto& [m, _] : update.json().items()) {
      const auto per_memory = update.at(m);
      const auto mi = index_of(Field(Json(m), per_memory.path(), source));
      per_memory.require_object();
      for (const auto& [state, __] : per_memory.json().items()) {
        const auto u = per_memory.at(state);
        if (u.json().is_string()) {
          strategy.set_update(mi, state, index_of(u));
        } else {
          u.require_object();
          for (const auto& [action, ___] : u.json().items()) {
            const auto next = index_of(u.at(action));
            if (action == MooreStrategy::any_state)
              strategy.set_update(mi, state, next);
            else
              strategy.set_update(mi, state, action, next);
          }
        }
      }
    }
    return strategy;
  } catch (const StrategyError& e) {
    throw IoError(source + ": " + e.what());
  }
}

Json strategy_to_json(const MooreStrategy& strategy) {
  Json choice = Json::object();
  for (const auto& [key, dist] : strategy.choices()) {
    auto& slot = choice[strategy.memory_name(key.first)][key.second];
    if (dist.size() == 1) {
      slot = dist.front().first;
    } else {
      slot = Json::object();
      for (const auto& [action, p] : dist) slot[action] = to_string(p);
    }
  }
  Json update = Json::object();
  for (const auto& [key, rule] : strategy.updates()) {
    auto& slot = update[strategy.memory_name(key.first)][key.second];
    if (rule.by_action.empty()) {
      slot = strategy.memory_name(*rule.any_action);
    } else {
      slot = Json::object();
      for (const auto& [action, next] : rule.by_action) slot[action] = strategy.memory_name(next);
      if (rule.any_action) slot[std::string(MooreStrategy::any_state)] = strategy.memory_name(*rule.any_action);
    }
  }
  return {{"memory_states", strategy.memory_names()},
          {"initial_memory", strategy.memory_name(strategy.initial_memory())},
          {"choice", choice},
          {"update", update}};
}

MooreStrategy load_strategy(const std::filesystem::path& path) {
  return strategy_from_json(read_json_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Queries

QueryResult run_query(const Model& model, const Json& query, const std::string& source, const MooreStrategy* strategy) {
  const Field q(query, "", source);
  const auto problem = q.at("problem").string();
  if (problem == "S1") return run_s1(require_mdp(model, q, problem), q);
  if (problem == "S2") return run_s2(require_mdp(model, q, problem), q);
  if (problem == "S3") return std::visit([&](const auto& m) { return run_s3(m, q); }, model);
  if (problem == "S4") return run_s4(require_mdp(model, q, problem), q);
  if (problem == "S5") return run_s5(require_mdp(model, q, problem), q);
  if (problem == "verify") {
    q.only_keys({"problem", "objectives"});
    if (!std::holds_alternative<WeightedGame>(model)) q.fail("verify needs a game model");
    return run_verify(std::get<WeightedGame>(model), require_strategy(strategy, q, problem), q.at("objectives"), source);
  }
  if (problem == "simulate")
    return run_simulate(require_mdp(model, q, problem), require_strategy(strategy, q, problem), q, source);
  if (problem == "evaluate") return evaluate_strategy(model, require_strategy(strategy, q, problem), query, source);
  q.at("problem").fail("unknown problem '" + problem + "'");
}

QueryResult evaluate_strategy(const Model& model, const MooreStrategy& strategy, const Json& spec,
                              const std::string& source) {
  const Field f(spec, "", source);
  if (const auto* mdp = std::get_if<WeightedMdp>(&model)) return evaluate_mdp(*mdp, strategy, f, source);
  f.only_keys({"problem", "objectives"});
  auto result = run_verify(std::get<WeightedGame>(model), strategy, f.at("objectives"), source);
  result.document["problem"] = "evaluate";
  return result;
}

std::string render_table(const Json& document) {
  std::vector<std::pair<std::string, std::string>> rows;
  auto walk = [&](auto&& self, const Json& value, const std::string& prefix) -> void {
    if (value.is_object() && !value.empty()) {
      for (const auto& [key, child] : value.items()) self(self, child, prefix.empty() ? key : prefix + "." + key);
    } else if (value.is_array() && !value.empty() && !std::all_of(value.begin(), value.end(), [](const Json& v) {
                 return v.is_primitive();
               })) {
      for (std::size_t i = 0; i < value.size(); ++i) self(self, value[i], prefix + "[" + std::to_string(i) + "]");
    } else {
      rows.emplace_back(prefix, value.is_string() ? value.get<std::string>() : value.dump());
    }
  };
  walk(walk, document, "");
  std::size_t width = 0;
  for (const auto& [k, _] : rows) width = std::max(width, k.size());
  std::string out;
  for (const auto& [k, v] : rows) out += k + std::string(width - k.size() + 2, ' ') + v + "\n";
  return out;
}

}  // namespace qsp
