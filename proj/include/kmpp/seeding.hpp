#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "rng.hpp"

namespace kmpp {

enum class SeedingKind { Uniform, DSquared, Alpha, FarthestPoint, NoRandom };

struct SeedingStrategy {
  SeedingKind kind = SeedingKind::DSquared;
  double alpha = 1.0;  ///< only meaningful for Alpha
  std::uint64_t rng_seed = 0;

  static SeedingStrategy uniform() { return {SeedingKind::Uniform}; }
  static SeedingStrategy dsquared() { return {SeedingKind::DSquared}; }
  static SeedingStrategy top_fraction(double alpha) { return {SeedingKind::Alpha, alpha}; }
  static SeedingStrategy farthest() { return {SeedingKind::FarthestPoint}; }
  static SeedingStrategy norandom() { return {SeedingKind::NoRandom}; }
};

/// CLI spelling: kmeans, kmeans++, alpha:<float>, alpha:eps, norandom.
inline std::string strategy_name(const SeedingStrategy& s) {
  switch (s.kind) {
    case SeedingKind::Uniform: return "kmeans";
    case SeedingKind::DSquared: return "kmeans++";
    case SeedingKind::FarthestPoint: return "alpha:eps";
    case SeedingKind::NoRandom: return "norandom";
    case SeedingKind::Alpha: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, s.alpha);
      return "alpha:" + std::string(buf, res.ptr);
    }
  }
  return "?";
}

/// Parses a CLI strategy string. Alpha values outside (0, 1] are rejected here;
/// the dataset-dependent lower bound 1/N is checked by validate_strategy.
inline SeedingStrategy parse_strategy(std::string_view text) {
  if (text == "kmeans") return SeedingStrategy::uniform();
  if (text == "kmeans++") return SeedingStrategy::dsquared();
  if (text == "norandom") return SeedingStrategy::norandom();
  if (text == "alpha:eps") return SeedingStrategy::farthest();
  constexpr std::string_view prefix = "alpha:";
  if (text.starts_with(prefix)) {
    auto num = text.substr(prefix.size());
    double alpha = 0.0;
    auto res = std::from_chars(num.data(), num.data() + num.size(), alpha);
    if (num.empty() || res.ec != std::errc{} || res.ptr != num.data() + num.size() ||
        !std::isfinite(alpha))
      throw usage_error("invalid alpha in strategy '" + std::string(text) +
                        "': expected alpha:<float> with alpha in (1/N, 1], or alpha:eps");
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw usage_error("strategy '" + std::string(text) + "': alpha must lie in (1/N, 1]");
    return SeedingStrategy::top_fraction(alpha);
  }
  throw usage_error("unknown strategy '" + std::string(text) +
                    "' (expected kmeans, kmeans++, alpha:<float>, alpha:eps or norandom)");
}

/// Size of the candidate subset, ceil(alpha * N) clamped to [1, N]. Products within
/// 1e-9 (relative) of an integer are treated as that integer, so 0.3 * 10 gives 3.
inline std::size_t subset_size(double alpha, std::size_t n) {
  const double x = alpha * static_cast<double>(n);
  const double r = std::round(x);
  const double m = std::abs(x - r) <= 1e-9 * std::max(1.0, x) ? r : std::ceil(x);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(m, 1.0)), 1, n);
}

namespace detail {

inline void check_alpha(double alpha, std::size_t n) {
  if (!(alpha > 1.0 / static_cast<double>(n) && alpha <= 1.0))
    throw usage_error("alpha = " + std::to_string(alpha) + " outside (1/N, 1] for N = " +
                      std::to_string(n) + "; use alpha:eps for the farthest-point limit");
}

inline std::size_t argmax_lowest(std::span<const double> d2) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < d2.size(); ++i)
    if (d2[i] > d2[best]) best = i;
  return best;
}

inline std::vector<double> d_squared_to(const Dataset& X, const CenterSet& C) {
  std::vector<double> d2(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) d2[i] = nearest_center(X[i], C).d_squared;
  return d2;
}

} // namespace detail

/// Checks the strategy against dataset size (alpha in (1/N, 1]).
inline void validate_strategy(const SeedingStrategy& s, std::size_t n) {
  if (s.kind == SeedingKind::Alpha) detail::check_alpha(s.alpha, n);
}

/// D^2-proportional probabilities restricted to the m points of largest D^2
/// (stable: ties at the boundary keep the lower index), zero elsewhere.
inline std::vector<double> top_subset_distribution(std::span<const double> d2, std::size_t m) {
  const std::size_t n = d2.size();
  if (m < 1 || m > n) throw usage_error("top_subset_distribution: subset size must lie in [1, N]");
  if (std::none_of(d2.begin(), d2.end(), [](double v) { return v > 0.0; }))
    throw degenerate_error("every point coincides with a chosen center; no next center exists");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d2[a] > d2[b]; });
  std::vector<char> in_subset(n, 0);
  for (std::size_t r = 0; r < m; ++r) in_subset[order[r]] = 1;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (in_subset[i]) total += d2[i];
  std::vector<double> p(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (in_subset[i]) p[i] = d2[i] / total;
  return p;
}

/// Next-center probabilities given each point's squared distance to its nearest
/// chosen center. Uniform has no distance-driven distribution and is rejected.
inline std::vector<double> center_distribution(std::span<const double> d2, const SeedingStrategy& s) {
  const std::size_t n = d2.size();
  if (std::none_of(d2.begin(), d2.end(), [](double v) { return v > 0.0; }))
    throw degenerate_error("every point coincides with a chosen center; no next center exists");

  std::vector<double> p(n, 0.0);
  switch (s.kind) {
    case SeedingKind::DSquared: {
      double total = 0.0;
      for (double v : d2) total += v;
      for (std::size_t i = 0; i < n; ++i) p[i] = d2[i] / total;
      break;
    }
    case SeedingKind::Alpha:
      detail::check_alpha(s.alpha, n);
      return top_subset_distribution(d2, subset_size(s.alpha, n));
    case SeedingKind::FarthestPoint:
    case SeedingKind::NoRandom:
      p[detail::argmax_lowest(d2)] = 1.0;
      break;
    case SeedingKind::Uniform:
      throw usage_error("uniform seeding has no D^2-driven next-center distribution");
  }
  return p;
}

inline std::vector<double> next_center_distribution(const Dataset& X, const CenterSet& C,
                                                    const SeedingStrategy& s) {
  if (C.empty()) throw usage_error("next_center_distribution: empty center set");
  return center_distribution(detail::d_squared_to(X, C), s);
}

/// Cumulative-sum inversion with a single uniform draw. Never returns an index
/// with zero probability.
inline std::size_t sample_index(std::span<const double> p, Rng& rng) {
  double total = 0.0;
  for (double v : p) total += v;
  const double target = rng.uniform01() * total;
  double cum = 0.0;
  std::size_t last_positive = p.size();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    cum += p[i];
    last_positive = i;
    if (target < cum) return i;
  }
  if (last_positive == p.size()) throw degenerate_error("sample_index: distribution has no mass");
  return last_positive;
}

/// Adds centers to C until it holds k, choosing each by `s` (DSquared, Alpha,
/// FarthestPoint or NoRandom; the latter two are deterministic here).
inline void grow_centers(const Dataset& X, CenterSet& C, std::size_t k, const SeedingStrategy& s,
                         Rng& rng) {
  if (C.empty()) throw usage_error("grow_centers: needs a first center");
  if (k > C.capacity()) throw usage_error("grow_centers: k exceeds center capacity");
  if (s.kind == SeedingKind::Alpha) detail::check_alpha(s.alpha, X.size());
  std::vector<double> d2 = detail::d_squared_to(X, C);
  while (C.size() < k) {
    std::size_t next = 0;
    if (s.kind == SeedingKind::FarthestPoint || s.kind == SeedingKind::NoRandom) {
      next = detail::argmax_lowest(d2);
      if (d2[next] <= 0.0)
        throw degenerate_error("every point coincides with a chosen center; no next center exists");
    } else {
      next = sample_index(center_distribution(d2, s), rng);
    }
    C.push_back(X[next]);
    const auto c = C[C.size() - 1];
    for (std::size_t i = 0; i < X.size(); ++i) d2[i] = std::min(d2[i], sq_dist(X[i], c));
  }
}

namespace detail {

inline void check_k(const Dataset& X, std::size_t k, bool need_distinct) {
  if (k < 1) throw usage_error("k must be >= 1");
  if (k > X.size())
    throw usage_error("k = " + std::to_string(k) + " exceeds the number of points (" +
                      std::to_string(X.size()) + ")");
  if (need_distinct) {
    const std::size_t distinct = count_distinct(X);
    if (k > distinct)
      throw usage_error("k = " + std::to_string(k) + " exceeds the number of distinct points (" +
                        std::to_string(distinct) + ")");
  }
}

inline CenterSet seed_from(const Dataset& X, std::size_t k, std::size_t first,
                           const SeedingStrategy& s, Rng& rng) {
  CenterSet C(X.dim(), k);
  C.push_back(X[first]);
  grow_centers(X, C, k, s, rng);
  return C;
}

} // namespace detail

/// k distinct indices uniformly without replacement (partial Fisher-Yates).
inline CenterSet seed_uniform(const Dataset& X, std::size_t k, Rng& rng) {
  detail::check_k(X, k, false);
  std::vector<std::size_t> idx(X.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  CenterSet C(X.dim(), k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.index(X.size() - i);
    std::swap(idx[i], idx[j]);
    C.push_back(X[idx[i]]);
  }
  return C;
}

inline CenterSet seed_dsquared(const Dataset& X, std::size_t k, Rng& rng) {
  detail::check_k(X, k, true);
  const std::size_t first = rng.index(X.size());
  return detail::seed_from(X, k, first, SeedingStrategy::dsquared(), rng);
}

inline CenterSet seed_alpha(const Dataset& X, std::size_t k, double alpha, Rng& rng) {
  detail::check_alpha(alpha, X.size());
  detail::check_k(X, k, true);
  const std::size_t first = rng.index(X.size());
  return detail::seed_from(X, k, first, SeedingStrategy::top_fraction(alpha), rng);
}

inline CenterSet seed_farthest(const Dataset& X, std::size_t k, Rng& rng) {
  detail::check_k(X, k, true);
  const std::size_t first = rng.index(X.size());
  return detail::seed_from(X, k, first, SeedingStrategy::farthest(), rng);
}

/// First center is the point farthest from a uniformly drawn pivot; the rest
/// follow farthest-point selection.
inline CenterSet seed_norandom(const Dataset& X, std::size_t k, Rng& rng) {
  detail::check_k(X, k, true);
  const auto pivot = X[rng.index(X.size())];
  std::vector<double> d(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) d[i] = sq_dist(X[i], pivot);
  return detail::seed_from(X, k, detail::argmax_lowest(d), SeedingStrategy::norandom(), rng);
}

inline CenterSet seed_centers(const Dataset& X, std::size_t k, const SeedingStrategy& s, Rng& rng) {
  switch (s.kind) {
    case SeedingKind::Uniform: return seed_uniform(X, k, rng);
    case SeedingKind::DSquared: return seed_dsquared(X, k, rng);
    case SeedingKind::Alpha: return seed_alpha(X, k, s.alpha, rng);
    case SeedingKind::FarthestPoint: return seed_farthest(X, k, rng);
    case SeedingKind::NoRandom: return seed_norandom(X, k, rng);
  }
  throw usage_error("unknown seeding kind");
}

/// Seeds with a fresh generator built from s.rng_seed.
inline CenterSet seed_centers(const Dataset& X, std::size_t k, const SeedingStrategy& s) {
  Rng rng(s.rng_seed);
  return seed_centers(X, k, s, rng);
}

/// Seeding with the first center fixed to X[first]; consumes no randomness for
/// the first pick. Uniform is not supported.
inline CenterSet seed_with_first(const Dataset& X, std::size_t k, std::size_t first,
                                 const SeedingStrategy& s, Rng& rng) {
  if (s.kind == SeedingKind::Uniform)
    throw usage_error("seed_with_first: uniform seeding has no distance-driven growth");
  if (first >= X.size()) throw usage_error("seed_with_first: first index out of range");
  detail::check_k(X, k, true);
  return detail::seed_from(X, k, first, s, rng);
}

} // namespace kmpp
