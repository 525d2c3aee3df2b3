#pragma once

#include <vector>

#include "qsp/rational.hpp"

namespace qsp {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Solves A x = b exactly by Gaussian elimination. Throws std::domain_error
/// if A is singular or the shapes disagree.
std::vector<Rational> solve_linear(RationalMatrix a, std::vector<Rational> b);

}  // namespace qsp
