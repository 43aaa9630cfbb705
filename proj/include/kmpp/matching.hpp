#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "error.hpp"

namespace kmpp {

/// Dense rows x cols weight matrix, row-major.
struct WeightMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> w;

  WeightMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), w(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return w[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return w[i * cols + j]; }
};

/// Maximum total weight of a one-to-one matching between rows and columns
/// (min(rows, cols) pairs), by trying every injection of the smaller side.
inline double max_matching_exhaustive(const WeightMatrix& m) {
  const bool by_rows = m.rows <= m.cols;
  const std::size_t small = by_rows ? m.rows : m.cols;
  const std::size_t large = by_rows ? m.cols : m.rows;
  auto at = [&](std::size_t s, std::size_t l) { return by_rows ? m(s, l) : m(l, s); };

  std::vector<char> used(large, 0);
  double best = -std::numeric_limits<double>::infinity();
  auto rec = [&](auto&& self, std::size_t s, double acc) -> void {
    if (s == small) {
      best = std::max(best, acc);
      return;
    }
    for (std::size_t l = 0; l < large; ++l) {
      if (used[l]) continue;
      used[l] = 1;
      self(self, s + 1, acc + at(s, l));
      used[l] = 0;
    }
  };
  rec(rec, 0, 0.0);
  return small == 0 ? 0.0 : best;
}

/// Maximum-weight one-to-one matching via the Hungarian method (O(n^3) on the
/// zero-padded square matrix). Returns the matched column for each row, or
/// cols when the row is left unmatched.
inline std::vector<std::size_t> hungarian_max(const WeightMatrix& m) {
  const std::size_t n = std::max(m.rows, m.cols);
  double top = 0.0;
  for (double v : m.w) top = std::max(top, v);
  // cost[i][j] for the padded square problem, 1-based as in the classic potentials formulation
  auto cost = [&](std::size_t i, std::size_t j) {
    const double w = (i <= m.rows && j <= m.cols) ? m(i - 1, j - 1) : 0.0;
    return top - w;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(m.rows, m.cols);
  for (std::size_t j = 1; j <= n; ++j)
    if (p[j] >= 1 && p[j] <= m.rows && j <= m.cols) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

inline double max_matching_hungarian(const WeightMatrix& m) {
  const auto match = hungarian_max(m);
  double total = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i)
    if (match[i] < m.cols) total += m(i, match[i]);
  return total;
}

/// Exhaustive search when both sides are at most 8, Hungarian otherwise.
inline double max_matching(const WeightMatrix& m) {
  return std::max(m.rows, m.cols) <= 8 ? max_matching_exhaustive(m) : max_matching_hungarian(m);
}

} // namespace kmpp
