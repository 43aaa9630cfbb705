#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "detail/bundled_data.hpp"
#include "detail/csv.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "rng.hpp"

namespace kmpp {

enum class LabelColumn { First, Last, None };

inline LabelColumn parse_label_column(std::string_view s) {
  if (s == "first") return LabelColumn::First;
  if (s == "last") return LabelColumn::Last;
  if (s == "none") return LabelColumn::None;
  throw usage_error("label column must be first, last or none (got '" + std::string(s) + "')");
}

struct DatasetSpec {
  std::string path;  ///< file path, or a builtin fixture name when `fixture` is set
  bool fixture = false;
  LabelColumn label_column = LabelColumn::None;
  char delimiter = ',';
  bool skip_header = false;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

} // namespace detail

/// Parses delimited text into a Dataset. Every non-label cell must be a finite
/// number and every row must have the arity of the first data row. Rows and
/// columns in errors are 1-based positions in the text.
inline Dataset parse_dataset(std::string_view text, const DatasetSpec& spec, std::string name = {}) {
  auto records = detail::split_csv(text, spec.delimiter);
  std::size_t first = spec.skip_header ? 1 : 0;
  // trailing blank lines are not data
  while (records.size() > first && records.back().size() == 1 && detail::trim(records.back()[0]).empty())
    records.pop_back();
  if (records.size() <= first) throw parse_error("no data rows", 0);

  const std::size_t arity = records[first].size();
  const bool labelled = spec.label_column != LabelColumn::None;
  if (labelled && arity < 2) throw parse_error("need at least one feature column besides the label", first + 1);
  const std::size_t label_col = spec.label_column == LabelColumn::First ? 0 : arity - 1;

  std::vector<Point> points;
  std::vector<std::string> labels;
  points.reserve(records.size() - first);
  for (std::size_t r = first; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::size_t row = r + 1;
    if (rec.size() != arity)
      throw parse_error("expected " + std::to_string(arity) + " fields, found " + std::to_string(rec.size()), row);
    Point p;
    p.reserve(arity);
    for (std::size_t c = 0; c < arity; ++c) {
      if (labelled && c == label_col) {
        labels.emplace_back(detail::trim(rec[c]));
        continue;
      }
      auto v = detail::to_double(rec[c]);
      if (!v) throw parse_error("non-numeric feature '" + rec[c] + "'", row, c + 1);
      p.push_back(*v);
    }
    points.push_back(std::move(p));
  }
  if (labelled) return Dataset(std::move(points), std::move(labels), std::move(name));
  return Dataset(std::move(points), std::nullopt, std::move(name));
}

/// Loads a fixture by name (iris, wine, blobs20, blobs10) or a CSV file.
inline Dataset load_fixture(std::string_view name);

inline Dataset load_csv(const DatasetSpec& spec) {
  if (spec.fixture) return load_fixture(spec.path);
  const std::filesystem::path path(spec.path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open dataset file '" + spec.path + "'", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw parse_error("dataset file '" + spec.path + "' is empty", 0);
  return parse_dataset(text, spec, path.stem().string());
}

/// Isotropic unit-variance Gaussian blobs. Blob centers are `separation` apart:
/// when dim >= num_clusters they sit at (separation / sqrt 2) * e_i, a regular
/// simplex; otherwise they lie on a cubic lattice with spacing `separation`,
/// filled in row-major order. Point coordinates use Box-Muller on Rng(seed), so
/// the output is identical across platforms. Labels are "blob<i>".
inline Dataset synth_mixture(std::size_t num_clusters, std::size_t points_per_cluster, double separation,
                             std::size_t dim, std::uint64_t seed) {
  if (num_clusters < 1 || points_per_cluster < 1 || dim < 1)
    throw usage_error("synth_mixture: counts must be >= 1");
  if (!(separation > 0.0)) throw usage_error("synth_mixture: separation must be > 0");

  std::vector<Point> centers(num_clusters, Point(dim, 0.0));
  if (dim >= num_clusters) {
    for (std::size_t c = 0; c < num_clusters; ++c) centers[c][c] = separation / std::numbers::sqrt2;
  } else {
    std::size_t side = 1;
    while (true) {
      std::size_t cap = 1;
      for (std::size_t j = 0; j < dim && cap < num_clusters; ++j) cap *= side;
      if (cap >= num_clusters) break;
      ++side;
    }
    for (std::size_t c = 0; c < num_clusters; ++c) {
      std::size_t rest = c;
      for (std::size_t j = dim; j-- > 0;) {
        centers[c][j] = separation * static_cast<double>(rest % side);
        rest /= side;
      }
    }
  }

  Rng rng(seed);
  std::optional<double> spare;
  auto gauss = [&] {
    if (spare) {
      const double v = *spare;
      spare.reset();
      return v;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare = r * std::sin(2.0 * std::numbers::pi * u2);
    return r * std::cos(2.0 * std::numbers::pi * u2);
  };

  std::vector<Point> points;
  std::vector<std::string> labels;
  points.reserve(num_clusters * points_per_cluster);
  for (std::size_t c = 0; c < num_clusters; ++c)
    for (std::size_t i = 0; i < points_per_cluster; ++i) {
      Point p(dim);
      for (std::size_t j = 0; j < dim; ++j) p[j] = centers[c][j] + gauss();
      points.push_back(std::move(p));
      labels.push_back("blob" + std::to_string(c));
    }
  return Dataset(std::move(points), std::move(labels),
                 "mixture-" + std::to_string(num_clusters) + "x" + std::to_string(points_per_cluster));
}

/// Per-column z-scoring with the population standard deviation. Constant
/// columns are only centered.
inline Dataset standardize(const Dataset& X) {
  const std::size_t n = X.size();
  const std::size_t d = X.dim();
  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += X[i][j];
  for (double& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) sd[j] += (X[i][j] - mean[j]) * (X[i][j] - mean[j]);
  for (double& s : sd) s = std::sqrt(s / static_cast<double>(n));
  std::vector<Point> pts(n, Point(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) pts[i][j] = (X[i][j] - mean[j]) / (sd[j] > 0.0 ? sd[j] : 1.0);
  return Dataset(std::move(pts), X.labels(), X.name());
}

/// CSV text with full round-trip precision, label in the last column if present.
inline std::string dataset_to_csv(const Dataset& X) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (std::size_t j = 0; j < X.dim(); ++j) {
      if (j) out += ',';
      auto res = std::to_chars(buf, buf + sizeof buf, X[i][j]);
      out.append(buf, res.ptr);
    }
    if (X.has_labels()) out += ',' + detail::quote_csv((*X.labels())[i]);
    out += '\n';
  }
  return out;
}

inline constexpr std::string_view k_fixture_names[] = {"iris", "wine", "blobs20", "blobs10"};

inline Dataset load_fixture(std::string_view name) {
  if (name == "iris")
    return parse_dataset(detail::k_iris_csv, {"", false, LabelColumn::Last, ',', true}, "iris");
  if (name == "wine")
    return parse_dataset(detail::k_wine_csv, {"", false, LabelColumn::Last, ',', true}, "wine");
  if (name == "blobs20") return synth_mixture(20, 60, 20.0, 2, 20).with_name("blobs20");
  if (name == "blobs10") return synth_mixture(10, 120, 12.0, 57, 10).with_name("blobs10");
  throw usage_error("unknown fixture '" + std::string(name) + "' (expected iris, wine, blobs20 or blobs10)");
}

} // namespace kmpp
