#include "qsp/simplex.hpp"

#include <stdexcept>
#include <string>

namespace qsp {

namespace {

using Tableau = std::vector<std::vector<Rational>>;

void pivot(Tableau& tableau, std::vector<Rational>& cost, std::vector<std::size_t>& basis, std::size_t leaving,
           std::size_t entering) {
  auto& pivot_row = tableau[leaving];
  const Rational p = pivot_row[entering];
  for (auto& v : pivot_row) v /= p;
  auto eliminate = [&](std::vector<Rational>& row) {
    if (row[entering] == 0) return;
    const Rational factor = row[entering];
    for (std::size_t j = 0; j < row.size(); ++j)
      if (pivot_row[j] != 0) row[j] -= factor * pivot_row[j];
  };
  for (std::size_t i = 0; i < tableau.size(); ++i)
    if (i != leaving) eliminate(tableau[i]);
  eliminate(cost);
  basis[leaving] = entering;
}

/// Minimizes the objective whose reduced costs are `cost` over columns below
/// `allowed`; returns false if unbounded.
bool run_simplex(Tableau& tableau, std::vector<Rational>& cost, std::vector<std::size_t>& basis, std::size_t allowed) {
  const std::size_t m = tableau.size();
  const std::size_t rhs = cost.size() - 1;
  while (true) {
    std::size_t entering = allowed;
    for (std::size_t j = 0; j < allowed; ++j)
      if (cost[j] < 0) {
        entering = j;
        break;
      }
    if (entering == allowed) return true;

    std::size_t leaving = m;
    Rational best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (tableau[i][entering] <= 0) continue;
      Rational ratio = tableau[i][rhs] / tableau[i][entering];
      if (leaving == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (leaving == m) return false;
    pivot(tableau, cost, basis, leaving, entering);
  }
}

}  // namespace

std::optional<std::vector<Rational>> solve_lp(const LinearProgram& lp) {
  using Relation = LinearProgram::Relation;
  const std::size_t m = lp.rows.size();
  auto check = [&](std::size_t var) {
    if (var >= lp.variables)
      throw std::invalid_argument("coefficient for variable " + std::to_string(var) + " but the program has " +
                                  std::to_string(lp.variables));
  };
  std::size_t slacks = 0;
  for (const auto& row : lp.rows) {
    for (const auto& [var, coeff] : row.coefficients) check(var);
    if (row.relation != Relation::equal) ++slacks;
  }
  for (const auto& [var, coeff] : lp.maximize) check(var);

  // columns: structural | slack/surplus | artificial | rhs
  const std::size_t first_slack = lp.variables;
  const std::size_t first_artificial = first_slack + slacks;
  const std::size_t width = first_artificial + m;
  Tableau tableau(m, std::vector<Rational>(width + 1));
  std::vector<std::size_t> basis(m);
  std::size_t next_slack = first_slack;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    auto& t = tableau[i];
    for (const auto& [var, coeff] : row.coefficients) t[var] += coeff;
    if (row.relation == Relation::greater_equal) t[next_slack++] = -1;
    if (row.relation == Relation::less_equal) t[next_slack++] = 1;
    t[width] = row.rhs;
    if (row.rhs < 0)
      for (auto& v : t) v = -v;
    t[first_artificial + i] = 1;
    basis[i] = first_artificial + i;
  }

  // phase one: minimize the sum of artificials
  std::vector<Rational> cost(width + 1);
  for (std::size_t j = first_artificial; j < width; ++j) cost[j] = 1;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= width; ++j) cost[j] -= tableau[i][j];
  run_simplex(tableau, cost, basis, width);
  if (cost[width] != 0) return std::nullopt;

  if (!lp.maximize.empty()) {
    // drive zero-level artificials out of the basis; rows left behind are redundant
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < first_artificial) continue;
      for (std::size_t j = 0; j < first_artificial; ++j)
        if (tableau[i][j] != 0) {
          pivot(tableau, cost, basis, i, j);
          break;
        }
    }
    // phase two: minimize -objective over non-artificial columns
    std::vector<Rational> phase2(width + 1);
    for (const auto& [var, coeff] : lp.maximize) phase2[var] -= coeff;
    for (std::size_t i = 0; i < m; ++i) {
      const Rational cb = basis[i] < lp.variables ? phase2[basis[i]] : Rational(0);
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= width; ++j) phase2[j] -= cb * tableau[i][j];
    }
    if (!run_simplex(tableau, phase2, basis, first_artificial)) throw std::domain_error("linear program is unbounded");
  }

  std::vector<Rational> x(lp.variables);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < lp.variables) x[basis[i]] = tableau[i][width];
  return x;
}

}  // namespace qsp
