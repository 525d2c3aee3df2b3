#include "qsp/linear.hpp"

#include <stdexcept>
#include <utility>

namespace qsp {

std::vector<Rational> solve_linear(RationalMatrix a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  if (a.size() != n) throw std::domain_error("solve_linear: row count does not match right-hand side");
  for (const auto& row : a)
    if (row.size() != n) throw std::domain_error("solve_linear: matrix is not square");

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw std::domain_error("solve_linear: singular system");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      Rational factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k)
        if (a[col][k] != 0) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

}  // namespace qsp
