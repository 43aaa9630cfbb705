#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"

namespace kmpp {

enum class EmptyClusterPolicy { RespawnFarthest };

struct LloydConfig {
  std::size_t max_iterations = 300;
  EmptyClusterPolicy empty_cluster_policy = EmptyClusterPolicy::RespawnFarthest;
};

struct LloydResult {
  CenterSet centers;
  Assignment assignment;  ///< nearest-center assignment to the final centers
  std::size_t iterations = 0;
  bool converged = false;
  /// potential_trace[0] is the potential of the initial centers; entry i is the
  /// potential after the i-th update.
  std::vector<double> potential_trace;
};

/// Centers plus the clustering they are paired with. `owner` need not be the
/// nearest-center assignment of `centers`.
struct ClusteringState {
  CenterSet centers;
  std::vector<std::size_t> owner;
};

inline Assignment assign_step(const Dataset& X, const CenterSet& C) { return potential(X, C); }

/// Recomputes centers as cluster centroids. A cluster with no members is
/// respawned at the point farthest from the centers settled so far (lowest index
/// on ties); empties are handled in index order, each seeing the previous respawns.
/// If every point already sits on a settled center, the empty cluster keeps
/// `previous[j]`.
inline CenterSet update_step(const Dataset& X, std::span<const std::size_t> owner,
                             const CenterSet& previous) {
  const std::size_t k = previous.size();
  const std::size_t d = X.dim();
  if (owner.size() != X.size()) throw usage_error("update_step: owner vector does not cover the dataset");
  if (previous.dim() != d) throw usage_error("update_step: center/dataset dimension mismatch");

  std::vector<double> sums(k * d, 0.0);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < X.size(); ++i) {
    const std::size_t j = owner[i];
    if (j >= k) throw usage_error("update_step: owner index " + std::to_string(j) + " >= k");
    ++counts[j];
    auto x = X[i];
    for (std::size_t c = 0; c < d; ++c) sums[j * d + c] += x[c];
  }

  CenterSet next(d, previous.capacity());
  std::vector<std::size_t> empties;
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] == 0) {
      empties.push_back(j);
      next.push_back(previous[j]);
      continue;
    }
    Point c(d);
    for (std::size_t t = 0; t < d; ++t) c[t] = sums[j * d + t] / static_cast<double>(counts[j]);
    next.push_back(c);
  }
  if (empties.empty()) return next;

  std::vector<char> settled(k, 1);
  for (std::size_t j : empties) settled[j] = 0;
  std::vector<double> d2(X.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (settled[j]) d2[i] = std::min(d2[i], sq_dist(X[i], next[j]));

  for (std::size_t j : empties) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < X.size(); ++i)
      if (d2[i] > d2[far]) far = i;
    if (!(d2[far] > 0.0)) continue;
    next.set(j, X[far]);
    settled[j] = 1;
    for (std::size_t i = 0; i < X.size(); ++i) d2[i] = std::min(d2[i], sq_dist(X[i], next[j]));
  }
  return next;
}

inline CenterSet update_step(const Dataset& X, const Assignment& a, const CenterSet& previous) {
  return update_step(X, a.owner, previous);
}

/// Potential of a state under its own pairing: sum of ||x - centers[owner[x]]||^2.
inline double state_potential(const Dataset& X, const ClusteringState& s) {
  if (s.owner.size() != X.size()) throw usage_error("state_potential: owner vector does not cover the dataset");
  std::vector<double> per(s.centers.size(), 0.0);
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (s.owner[i] >= s.centers.size()) throw usage_error("state_potential: owner index out of range");
    per[s.owner[i]] += sq_dist(X[i], s.centers[s.owner[i]]);
  }
  double total = 0.0;
  for (double v : per) total += v;
  return total;
}

/// One assign+update pass: reassign to the nearest of `before.centers`, then move
/// centers to the centroids of that clustering.
inline ClusteringState lloyd_step(const Dataset& X, const ClusteringState& before) {
  auto a = assign_step(X, before.centers);
  auto next = update_step(X, a.owner, before.centers);
  return {std::move(next), std::move(a.owner)};
}

using StepObserver = std::function<void(const ClusteringState& before, const ClusteringState& after)>;

/// Alternates assignment and update until the owner vector stops changing or
/// max_iterations passes have run.
inline LloydResult run_lloyd(const Dataset& X, const CenterSet& C0, const LloydConfig& cfg = {},
                             const StepObserver& observer = {}) {
  if (cfg.max_iterations < 1) throw usage_error("max_iterations must be >= 1");
  if (C0.empty()) throw usage_error("run_lloyd: empty initial center set");

  Assignment a = assign_step(X, C0);
  ClusteringState state{C0, a.owner};
  LloydResult r{C0, {}, 0, false, {a.potential}};

  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    ClusteringState next{update_step(X, a.owner, state.centers), a.owner};
    if (observer) observer(state, next);
    a = assign_step(X, next.centers);
    r.potential_trace.push_back(a.potential);
    r.iterations = it;
    const bool changed = a.owner != next.owner;
    state = std::move(next);
    if (!changed) {
      r.converged = true;
      break;
    }
  }
  r.centers = state.centers;
  r.assignment = std::move(a);
  return r;
}

struct Lemma1Gap {
  double lhs;  ///< sum ||x - z||^2 - sum ||x - c(S)||^2
  double rhs;  ///< |S| * ||c(S) - z||^2
};

/// Both sides of the centroid displacement identity, computed independently.
inline Lemma1Gap lemma1_gap(std::span<const Point> S, PointView z) {
  if (S.empty()) throw usage_error("lemma1_gap: empty point set");
  const Point c = centroid(S);
  double about_z = 0.0;
  double about_c = 0.0;
  for (const auto& x : S) {
    about_z += sq_dist(x, z);
    about_c += sq_dist(x, c);
  }
  return {about_z - about_c, static_cast<double>(S.size()) * sq_dist(c, z)};
}

struct StepImprovement {
  double actual_drop;  ///< phi(before) - phi(after)
  double bound;        ///< sum_j |S'_j| * ||c'_j - c_j||^2
};

/// Potential drop of one Lloyd pass versus the centroid-displacement lower bound.
/// `after` is expected to be lloyd_step(X, before).
inline StepImprovement step_improvement_bound(const Dataset& X, const ClusteringState& before,
                                              const ClusteringState& after) {
  if (before.centers.size() != after.centers.size())
    throw usage_error("step_improvement_bound: cluster count mismatch (" +
                      std::to_string(before.centers.size()) + " vs " +
                      std::to_string(after.centers.size()) + ")");
  std::vector<std::size_t> sizes(after.centers.size(), 0);
  for (std::size_t j : after.owner) {
    if (j >= sizes.size()) throw usage_error("step_improvement_bound: owner index out of range");
    ++sizes[j];
  }
  double bound = 0.0;
  for (std::size_t j = 0; j < sizes.size(); ++j)
    bound += static_cast<double>(sizes[j]) * sq_dist(after.centers[j], before.centers[j]);
  return {state_potential(X, before) - state_potential(X, after), bound};
}

} // namespace kmpp
