#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "seeding.hpp"

namespace kmpp {

/// Enumeration budget for brute_force_optimal, in candidate assignments (k^N).
inline constexpr std::uint64_t k_max_enumeration = 10'000'000;

struct OptimalResult {
  double phi_opt = 0.0;
  std::vector<std::size_t> best_assignment;
  std::uint64_t enumerated = 0;

  /// Centroids of the non-empty clusters of best_assignment, in cluster-id order.
  CenterSet centers(const Dataset& X) const {
    std::size_t k = 0;
    for (std::size_t j : best_assignment) k = std::max(k, j + 1);
    std::vector<Point> out;
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<Point> members;
      for (std::size_t i = 0; i < X.size(); ++i)
        if (best_assignment[i] == j) members.emplace_back(X[i].begin(), X[i].end());
      if (!members.empty()) out.push_back(centroid(members));
    }
    return CenterSet::from_points(out);
  }
};

/// Exact k-means optimum by enumerating all k^N owner vectors, scoring each with
/// centers at cluster centroids. Empty clusters contribute nothing.
inline OptimalResult brute_force_optimal(const Dataset& X, std::size_t k) {
  const std::size_t n = X.size();
  const std::size_t d = X.dim();
  if (k < 1 || k > n) throw usage_error("brute_force_optimal: need 1 <= k <= N");
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > k_max_enumeration / k)
      throw guard_error("brute_force_optimal: k^N = " + std::to_string(k) + "^" + std::to_string(n) +
                        " exceeds the enumeration limit of 10^7");
    total *= k;
  }

  OptimalResult best;
  best.phi_opt = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> owner(n, 0);
  std::vector<double> sums(k * d);
  std::vector<std::size_t> counts(k);

  for (std::uint64_t e = 0; e < total; ++e) {
    if (e > 0) {
      for (std::size_t i = 0; i < n; ++i) {
        if (++owner[i] < k) break;
        owner[i] = 0;
      }
    }
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto x = X[i];
      ++counts[owner[i]];
      for (std::size_t t = 0; t < d; ++t) sums[owner[i] * d + t] += x[t];
    }
    for (std::size_t j = 0; j < k; ++j)
      if (counts[j] > 0)
        for (std::size_t t = 0; t < d; ++t) sums[j * d + t] /= static_cast<double>(counts[j]);
    double phi = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      phi += sq_dist(X[i], PointView(sums.data() + owner[i] * d, d));
    if (phi < best.phi_opt) {
      best.phi_opt = phi;
      best.best_assignment = owner;
    }
  }
  best.enumerated = total;
  return best;
}

struct CompetitiveRatio {
  double mean_phi;
  double ratio;        ///< mean_phi / phi_opt
  double std_error;    ///< standard error of mean_phi
  double phi_opt;
};

/// Mean seeding-only potential over `trials` runs relative to the exact optimum.
/// Trial t draws from Rng(derive_seed(strategy.rng_seed, name, t)).
inline CompetitiveRatio competitive_ratio(const Dataset& X, std::size_t k, const SeedingStrategy& strategy,
                                          std::size_t trials) {
  if (trials < 1) throw usage_error("competitive_ratio: trials must be >= 1");
  const double phi_opt = brute_force_optimal(X, k).phi_opt;
  if (!(phi_opt > 0.0)) throw degenerate_error("competitive_ratio: phi_OPT = 0, ratio undefined");
  const std::string name = strategy_name(strategy);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(strategy.rng_seed, name, t));
    const double phi = potential(X, seed_centers(X, k, strategy, rng)).potential;
    sum += phi;
    sum_sq += phi * phi;
  }
  const double m = static_cast<double>(trials);
  const double mean = sum / m;
  const double var = trials > 1 ? std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0)) : 0.0;
  return {mean, mean / phi_opt, std::sqrt(var / m), phi_opt};
}

} // namespace kmpp
