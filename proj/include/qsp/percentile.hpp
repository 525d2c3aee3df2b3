#pragma once

#include <cstddef>
#include <cstdint>

#include "qsp/model.hpp"
#include "qsp/unfolding.hpp"

namespace qsp {

struct PercentileSolution {
  bool satisfied;           // max probability >= alpha
  Rational probability;     // max over strategies of P[TS <= bound]
  MooreStrategy strategy;   // pure, memory tracks the spent budget
};

/// Maximizes P[TS <= bound] by backward induction over the budget unfolding,
/// in decreasing order of spent budget. Ties go to the lowest action name.
PercentileSolution solve_percentile(const WeightedMdp& mdp, const TargetSet& target, std::size_t dimension,
                                    std::int64_t bound, const Rational& alpha);

}  // namespace qsp
