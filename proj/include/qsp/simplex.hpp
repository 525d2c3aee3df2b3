#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "qsp/rational.hpp"

namespace qsp {

/// Linear constraints over non-negative variables x_0..x_{n-1}, with an
/// optional linear objective to maximize.
struct LinearProgram {
  enum class Relation { equal, greater_equal, less_equal };
  struct Row {
    std::vector<std::pair<std::size_t, Rational>> coefficients;
    Relation relation;
    Rational rhs;
  };
  std::size_t variables = 0;
  std::vector<Row> rows;
  std::vector<std::pair<std::size_t, Rational>> maximize;  // empty: any feasible point
};

/// Exact two-phase simplex with Bland's rule. Returns an optimal vertex (a
/// feasible one when there is no objective) or nullopt when infeasible.
/// Throws std::invalid_argument on a coefficient referring to a variable out
/// of range and std::domain_error when the objective is unbounded.
std::optional<std::vector<Rational>> solve_lp(const LinearProgram& lp);

}  // namespace qsp
