#include "qsp/simulate.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "qsp/chain.hpp"

namespace qsp {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Move {
  std::vector<Rational> probabilities;  // outcome distribution
  std::vector<std::size_t> next;        // product node per outcome
  std::vector<StateIndex> state;
  std::size_t action;
};

struct Table {
  std::vector<StateIndex> state;
  std::vector<std::vector<Rational>> choice;  // per node: action probabilities
  std::vector<std::vector<Move>> moves;       // per node: one entry per choice
};

Table compile(const WeightedMdp& mdp, const MooreStrategy& strategy, const InducedChain& chain) {
  std::map<std::pair<StateIndex, MemoryIndex>, std::size_t> index;
  for (std::size_t n = 0; n < chain.size(); ++n) index[{chain.node(n).state, chain.node(n).memory}] = n;
  Table table;
  for (std::size_t n = 0; n < chain.size(); ++n) {
    const auto [state, memory] = chain.node(n);
    const auto step = strategy_step(strategy, memory, mdp.state_name(state));
    table.state.push_back(state);
    auto& choice = table.choice.emplace_back();
    auto& moves = table.moves.emplace_back();
    for (const auto& [name, p] : step.distribution) {
      const Action* action = mdp.find_action(state, name);
      Move move{{}, {}, {}, static_cast<std::size_t>(action - mdp.actions().data())};
      for (const auto& o : action->outcomes) {
        move.probabilities.push_back(o.probability);
        move.next.push_back(index.at({o.target, *step.next(name, mdp.state_name(o.target))}));
        move.state.push_back(o.target);
      }
      choice.push_back(p);
      moves.push_back(std::move(move));
    }
  }
  return table;
}

struct Welford {
  std::uint64_t n = 0;
  double mean = 0;
  double m2 = 0;
  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
};

}  // namespace

std::uint64_t random_word(std::uint64_t seed, std::uint64_t run, std::uint64_t draw) {
  return mix(mix(mix(seed) ^ run) ^ draw);
}

std::size_t sample_index(std::uint64_t word, const std::vector<Rational>& probabilities) {
  // word / 2^64 < cumulative  <=>  word * den < num * 2^64
  mpz_class scaled(static_cast<unsigned long>(word >> 32));
  scaled <<= 32;
  scaled += static_cast<unsigned long>(word & 0xffffffffULL);
  Rational cumulative = 0;
  for (std::size_t i = 0; i + 1 < probabilities.size(); ++i) {
    cumulative += probabilities[i];
    mpz_class lhs = scaled * cumulative.get_den();
    mpz_class rhs = cumulative.get_num();
    rhs <<= 64;
    if (lhs < rhs) return i;
  }
  return probabilities.size() - 1;
}

double normal_quantile(double level) {
  if (level == 0.95) return 1.959963984540054;
  if (level == 0.99) return 2.5758293035489004;
  throw std::invalid_argument("unsupported confidence level");
}

SimReport simulate(const WeightedMdp& mdp, const MooreStrategy& strategy, const SimConfig& config) {
  if (config.runs == 0) throw QueryError("simulation needs at least one run");
  if (config.horizon == 0) throw QueryError("simulation horizon must be positive");
  if (config.estimators.empty()) throw QueryError("simulation needs at least one estimator");

  const auto chain = induce_chain(mdp, strategy);
  for (const auto& e : config.estimators) require_positive_weights(chain, e.target, e.dimension);
  const auto table = compile(mdp, strategy, chain);

  const auto k = config.estimators.size();
  std::vector<Welford> stats(k);
  std::vector<std::uint64_t> censored(k, 0);
  std::vector<std::int64_t> spent(k);
  std::vector<bool> resolved(k);

  for (std::uint64_t run = 0; run < config.runs; ++run) {
    std::size_t node = chain.initial();
    std::fill(spent.begin(), spent.end(), 0);
    std::size_t open = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& est = config.estimators[i];
      resolved[i] = false;
      if (est.target.contains(table.state[node])) {
        stats[i].add(est.kind == Estimator::Kind::probability ? (est.bound >= 0 ? 1.0 : 0.0) : 0.0);
        resolved[i] = true;
      } else if (est.kind == Estimator::Kind::probability && est.bound < 0) {
        stats[i].add(0.0);
        resolved[i] = true;
      } else {
        ++open;
      }
    }
    std::uint64_t draw = 0;
    for (std::uint64_t t = 0; open > 0 && t < config.horizon; ++t) {
      const auto c = sample_index(random_word(config.seed, run, draw++), table.choice[node]);
      const auto& move = table.moves[node][c];
      const auto o = sample_index(random_word(config.seed, run, draw++), move.probabilities);
      const auto& weight = mdp.action(move.action).weight;
      for (std::size_t i = 0; i < k; ++i) {
        if (resolved[i]) continue;
        const auto& est = config.estimators[i];
        spent[i] += weight[est.dimension];
        const bool hit = est.target.contains(move.state[o]);
        if (est.kind == Estimator::Kind::probability) {
          if (spent[i] > est.bound) {
            stats[i].add(0.0);
          } else if (hit) {
            stats[i].add(1.0);
          } else {
            continue;
          }
        } else if (hit) {
          stats[i].add(static_cast<double>(spent[i]));
        } else {
          continue;
        }
        resolved[i] = true;
        --open;
      }
      node = move.next[o];
    }
    for (std::size_t i = 0; i < k; ++i)
      if (!resolved[i]) ++censored[i];
  }

  SimReport report{config.runs, config.seed, {}};
  const double z = normal_quantile(0.95);
  for (std::size_t i = 0; i < k; ++i) {
    Estimate e;
    e.label = config.estimators[i].label;
    e.samples = stats[i].n;
    e.censored = censored[i];
    e.mean = stats[i].mean;
    e.stddev = stats[i].n > 1 ? std::sqrt(stats[i].m2 / static_cast<double>(stats[i].n - 1)) : 0.0;
    const double half = stats[i].n > 0 ? z * e.stddev / std::sqrt(static_cast<double>(stats[i].n)) : 0.0;
    e.ci_low = e.mean - half;
    e.ci_high = e.mean + half;
    report.estimates.push_back(std::move(e));
  }
  return report;
}

}  // namespace qsp
