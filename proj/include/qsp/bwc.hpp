#pragma once

// Beyond-worst-case synthesis for the shortest path: minimal expected
// truncated sum among strategies whose every run reaches the target within a
// hard worst-case budget.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "qsp/extended.hpp"
#include "qsp/model.hpp"

namespace qsp {

enum class BwcVerdict { yes, no, infeasible_worst_case };

struct BwcSolution {
  BwcVerdict verdict;
  ExtendedNatural initial_worst_case;        // optimal worst case at the initial state
  std::optional<Rational> expectation;       // set unless infeasible
  std::optional<std::int64_t> certified_worst_case;
  std::optional<MooreStrategy> strategy;     // pure, memory tracks the spent budget
};

/// Actions are allowed at (s, spent) only if every successor can still reach
/// the target within the remaining budget against an adversary; expectation
/// is then minimized by backward induction over that pruned unfolding.
BwcSolution solve_bwc(const WeightedMdp& mdp, const TargetSet& target, std::size_t dimension,
                      std::int64_t worst_case_bound, const Rational& expectation_bound);

}  // namespace qsp
