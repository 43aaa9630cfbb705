#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace kmpp {

using Point = std::vector<double>;
using PointView = std::span<const double>;

/// Squared Euclidean distance, accumulated left to right over coordinates.
inline double sq_dist(PointView a, PointView b) {
  if (a.size() != b.size())
    throw usage_error("sq_dist: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + ")");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

/// Immutable, row-major collection of N points in d dimensions with optional labels.
class Dataset {
public:
  Dataset(std::vector<Point> points, std::optional<std::vector<std::string>> labels = std::nullopt,
          std::string name = {})
      : labels_(std::move(labels)), name_(std::move(name)) {
    if (points.empty()) throw usage_error("dataset must contain at least one point");
    dim_ = points.front().size();
    if (dim_ == 0) throw usage_error("dataset points must have dimension >= 1");
    size_ = points.size();
    coords_.reserve(size_ * dim_);
    for (std::size_t i = 0; i < size_; ++i) {
      if (points[i].size() != dim_)
        throw usage_error("dataset point " + std::to_string(i) + " has dimension " +
                          std::to_string(points[i].size()) + ", expected " + std::to_string(dim_));
      for (double v : points[i]) {
        if (!std::isfinite(v))
          throw usage_error("dataset point " + std::to_string(i) + " has a non-finite coordinate");
        coords_.push_back(v);
      }
    }
    if (labels_ && labels_->size() != size_)
      throw usage_error("dataset has " + std::to_string(size_) + " points but " +
                        std::to_string(labels_->size()) + " labels");
  }

  std::size_t size() const noexcept { return size_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::string& name() const noexcept { return name_; }

  PointView point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  PointView operator[](std::size_t i) const { return point(i); }

  bool has_labels() const noexcept { return labels_.has_value(); }
  const std::optional<std::vector<std::string>>& labels() const noexcept { return labels_; }

  /// Row-major coordinates, size() * dim() entries.
  std::span<const double> coordinates() const noexcept { return coords_; }

  Dataset with_name(std::string name) const {
    Dataset copy = *this;
    copy.name_ = std::move(name);
    return copy;
  }

  bool operator==(const Dataset&) const = default;

private:
  std::vector<double> coords_;
  std::size_t size_ = 0;
  std::size_t dim_ = 0;
  std::optional<std::vector<std::string>> labels_;
  std::string name_;
};

/// Number of pairwise-distinct points (exact coordinate equality).
inline std::size_t count_distinct(const Dataset& X) {
  std::vector<std::size_t> idx(X.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto less = [&](std::size_t a, std::size_t b) {
    auto pa = X[a], pb = X[b];
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  };
  std::sort(idx.begin(), idx.end(), less);
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (i == 0 || less(idx[i - 1], idx[i])) ++distinct;
  return distinct;
}

/// Ordered centers, at most `capacity` of them, all of one dimension.
class CenterSet {
public:
  CenterSet(std::size_t dim, std::size_t capacity) : dim_(dim), capacity_(capacity) {
    if (dim == 0) throw usage_error("center dimension must be >= 1");
    if (capacity == 0) throw usage_error("center capacity k must be >= 1");
    coords_.reserve(dim * capacity);
  }

  /// Builds a full set (capacity = number of centers).
  static CenterSet from_points(const std::vector<Point>& centers) {
    if (centers.empty()) throw usage_error("center set needs at least one center");
    CenterSet c(centers.front().size(), centers.size());
    for (const auto& p : centers) c.push_back(p);
    return c;
  }

  void push_back(PointView p) {
    if (p.size() != dim_) throw usage_error("center dimension mismatch");
    if (size() == capacity_) throw usage_error("center set is full (k = " + std::to_string(capacity_) + ")");
    coords_.insert(coords_.end(), p.begin(), p.end());
  }

  void set(std::size_t i, PointView p) {
    if (p.size() != dim_) throw usage_error("center dimension mismatch");
    std::copy(p.begin(), p.end(), coords_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
  }

  std::size_t size() const noexcept { return coords_.size() / dim_; }
  bool empty() const noexcept { return coords_.empty(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t capacity() const noexcept { return capacity_; }

  PointView operator[](std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  Point to_point(std::size_t i) const {
    auto v = (*this)[i];
    return {v.begin(), v.end()};
  }

  bool operator==(const CenterSet&) const = default;

private:
  std::vector<double> coords_;
  std::size_t dim_;
  std::size_t capacity_;
};

struct NearestCenter {
  std::size_t index;
  double d_squared;
};

/// Lowest index attaining the minimal squared distance.
inline NearestCenter nearest_center(PointView x, const CenterSet& C) {
  if (C.empty()) throw usage_error("nearest_center: empty center set");
  NearestCenter best{0, sq_dist(x, C[0])};
  for (std::size_t i = 1; i < C.size(); ++i) {
    const double d = sq_dist(x, C[i]);
    if (d < best.d_squared) best = {i, d};
  }
  return best;
}

struct Assignment {
  std::vector<std::size_t> owner;
  std::vector<double> d_squared;  ///< per-point distance to its owner
  std::vector<double> per_cluster_potential;
  double potential = 0.0;
};

/// Nearest-center assignment and potential. Per-cluster sums accumulate in point
/// order; the total is the left-to-right sum of the per-cluster values.
inline Assignment potential(const Dataset& X, const CenterSet& C) {
  if (C.empty()) throw usage_error("potential: empty center set");
  if (C.dim() != X.dim()) throw usage_error("potential: center/dataset dimension mismatch");
  Assignment a;
  a.owner.resize(X.size());
  a.d_squared.resize(X.size());
  a.per_cluster_potential.assign(C.size(), 0.0);
  for (std::size_t i = 0; i < X.size(); ++i) {
    const auto nc = nearest_center(X[i], C);
    a.owner[i] = nc.index;
    a.d_squared[i] = nc.d_squared;
    a.per_cluster_potential[nc.index] += nc.d_squared;
  }
  for (double v : a.per_cluster_potential) a.potential += v;
  return a;
}

inline Point centroid(std::span<const Point> points) {
  if (points.empty()) throw usage_error("centroid of an empty point list");
  Point c(points.front().size(), 0.0);
  for (const auto& p : points) {
    if (p.size() != c.size()) throw usage_error("centroid: dimension mismatch");
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += p[j];
  }
  for (double& v : c) v /= static_cast<double>(points.size());
  return c;
}

} // namespace kmpp
