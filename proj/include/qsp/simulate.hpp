#pragma once

// Monte Carlo runs of a finite-memory strategy on an MDP. Draws come from a
// counter-based generator keyed by (seed, run, draw), so each run is an
// independent, reproducible substream.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsp/model.hpp"

namespace qsp {

struct Estimator {
  enum class Kind { expectation, probability };
  Kind kind = Kind::expectation;
  TargetSet target;
  std::size_t dimension = 0;
  std::int64_t bound = 0;  // probability of TS <= bound; unused for expectation
  std::string label;
};

struct SimConfig {
  std::uint64_t runs = 0;
  std::uint64_t seed = 0;
  std::uint64_t horizon = 10000;
  std::vector<Estimator> estimators;
};

struct Estimate {
  std::string label;
  std::uint64_t samples = 0;   // runs contributing to the estimate
  std::uint64_t censored = 0;  // runs cut off by the horizon before resolving
  double mean = 0;
  double stddev = 0;           // sample standard deviation
  double ci_low = 0;
  double ci_high = 0;          // 95% normal interval around the mean

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

struct SimReport {
  std::uint64_t runs = 0;
  std::uint64_t seed = 0;
  std::vector<Estimate> estimates;

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

/// Uniform 64-bit draw number `draw` of run `run`.
std::uint64_t random_word(std::uint64_t seed, std::uint64_t run, std::uint64_t draw);

/// Index of the entry selected by the uniform draw `word` / 2^64 against the
/// cumulative probabilities of `probabilities` (which sum to 1).
std::size_t sample_index(std::uint64_t word, const std::vector<Rational>& probabilities);

/// Throws StrategyError for incomplete strategies and QueryError for an
/// invalid configuration (no runs, zero horizon, no estimators).
SimReport simulate(const WeightedMdp& mdp, const MooreStrategy& strategy, const SimConfig& config);

/// Half-width factor of a two-sided normal interval at the given level (0.95 or 0.99).
double normal_quantile(double level);

}  // namespace qsp
