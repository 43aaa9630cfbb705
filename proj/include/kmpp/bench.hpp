#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "detail/csv.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "lloyd.hpp"
#include "matching.hpp"
#include "rng.hpp"
#include "seeding.hpp"

namespace kmpp {

inline constexpr double k_default_correctness_threshold = 0.80;

struct AccuracyResult {
  double agreement;  ///< fraction of points on the best cluster-to-class matching
  bool correct;      ///< agreement >= threshold
};

/// Agreement between a clustering and class labels under the best one-to-one
/// matching of cluster ids to classes. Works for any number of classes; when there
/// are more classes than clusters, the surplus classes go unmatched.
inline AccuracyResult accuracy(std::span<const std::size_t> owner, std::span<const std::string> labels,
                               std::size_t k, double threshold = k_default_correctness_threshold) {
  if (owner.size() != labels.size())
    throw usage_error("accuracy: " + std::to_string(owner.size()) + " assignments but " +
                      std::to_string(labels.size()) + " labels");
  if (owner.empty()) throw usage_error("accuracy: empty clustering");
  std::map<std::string, std::size_t, std::less<>> class_id;
  for (const auto& l : labels) class_id.try_emplace(l, class_id.size());

  WeightMatrix counts(k, class_id.size());
  for (std::size_t i = 0; i < owner.size(); ++i) {
    if (owner[i] >= k) throw usage_error("accuracy: owner index out of range");
    counts(owner[i], class_id.find(labels[i])->second) += 1.0;
  }
  const double agreement = max_matching(counts) / static_cast<double>(owner.size());
  return {agreement, agreement >= threshold};
}

struct TrialReport {
  SeedingStrategy strategy;
  std::string strategy_label;  ///< CLI spelling of the strategy
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double final_phi = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::chrono::duration<double> wall_time{};
  std::optional<bool> correct;
  std::optional<double> agreement;
};

struct TrialOptions {
  LloydConfig lloyd{};
  double correctness_threshold = k_default_correctness_threshold;
  unsigned threads = 1;
};

namespace detail {

inline TrialReport run_one_trial(const Dataset& X, std::size_t k, const SeedingStrategy& s,
                                 const std::string& label, std::size_t t, std::uint64_t master_seed,
                                 const TrialOptions& opt) {
  TrialReport r;
  r.strategy = s;
  r.strategy_label = label;
  r.trial = t;
  r.seed = derive_seed(master_seed, label, t);
  r.strategy.rng_seed = r.seed;

  const auto start = std::chrono::steady_clock::now();
  Rng rng(r.seed);
  const CenterSet C0 = seed_centers(X, k, s, rng);
  LloydResult res = run_lloyd(X, C0, opt.lloyd);
  const auto stop = std::chrono::steady_clock::now();

  r.wall_time = std::max(std::chrono::duration<double>(stop - start), std::chrono::duration<double>(1e-9));
  r.final_phi = res.assignment.potential;
  r.iterations = res.iterations;
  r.converged = res.converged;
  if (X.has_labels()) {
    const auto acc = accuracy(res.assignment.owner, *X.labels(), k, opt.correctness_threshold);
    r.correct = acc.correct;
    r.agreement = acc.agreement;
  }
  return r;
}

template <class E>
[[noreturn]] void rethrow_annotated(const E&, const std::string& where, const char* what) {
  throw E(where + ": " + what);
}

} // namespace detail

/// Runs `trials` independent seed+Lloyd executions for every strategy. Output is
/// strategy-major in the order given. Trial t of strategy s seeds its generator
/// with derive_seed(master_seed, strategy_name(s), t), so results do not depend on
/// thread count or scheduling.
inline std::vector<TrialReport> run_trials(const Dataset& X, std::size_t k,
                                           std::span<const SeedingStrategy> strategies, std::size_t trials,
                                           std::uint64_t master_seed, const TrialOptions& opt = {}) {
  if (trials < 1) throw usage_error("run_trials: trials must be >= 1");
  if (strategies.empty()) throw usage_error("run_trials: no strategies given");
  std::vector<std::string> labels;
  for (const auto& s : strategies) {
    validate_strategy(s, X.size());
    labels.push_back(strategy_name(s));
  }

  const std::size_t total = strategies.size() * trials;
  std::vector<TrialReport> out(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t job; (job = next.fetch_add(1)) < total;) {
      const std::size_t si = job / trials;
      const std::size_t t = job % trials;
      const std::string where = "strategy " + labels[si] + ", trial " + std::to_string(t);
      try {
        try {
          out[job] = detail::run_one_trial(X, k, strategies[si], labels[si], t, master_seed, opt);
        } catch (const usage_error& e) {
          detail::rethrow_annotated(e, where, e.what());
        } catch (const degenerate_error& e) {
          detail::rethrow_annotated(e, where, e.what());
        }
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

struct BenchmarkRow {
  std::string strategy;
  double avg_phi = 0.0;
  double min_phi = 0.0;
  double time_ratio = 0.0;
  std::optional<double> accuracy;

  bool operator==(const BenchmarkRow&) const = default;
};

struct BenchmarkTable {
  std::string dataset;
  std::size_t k = 0;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  std::string baseline;
  std::vector<BenchmarkRow> rows;

  bool has_accuracy() const {
    return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.accuracy.has_value(); });
  }
  const BenchmarkRow* find(std::string_view strategy) const {
    for (const auto& r : rows)
      if (r.strategy == strategy) return &r;
    return nullptr;
  }

  bool operator==(const BenchmarkTable&) const = default;
};

struct TableInfo {
  std::string dataset;
  std::size_t k = 0;
  std::uint64_t master_seed = 0;
};

/// Per-strategy mean/min of final potential, mean wall time relative to the
/// baseline strategy, and the fraction of correct trials when labels exist.
/// Rows keep the first-appearance order of strategies in `reports`.
inline BenchmarkTable aggregate(std::span<const TrialReport> reports, std::string_view baseline,
                                const TableInfo& info = {}) {
  if (reports.empty()) throw usage_error("aggregate: no trial reports");

  struct Acc {
    std::size_t n = 0;
    double phi_sum = 0.0;
    double phi_min = 0.0;
    double time_sum = 0.0;
    std::size_t labelled = 0;
    std::size_t correct = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Acc, std::less<>> acc;
  for (const auto& r : reports) {
    auto [it, fresh] = acc.try_emplace(r.strategy_label);
    if (fresh) order.push_back(r.strategy_label);
    Acc& a = it->second;
    a.phi_min = a.n == 0 ? r.final_phi : std::min(a.phi_min, r.final_phi);
    a.phi_sum += r.final_phi;
    a.time_sum += r.wall_time.count();
    ++a.n;
    if (r.correct) {
      ++a.labelled;
      if (*r.correct) ++a.correct;
    }
  }
  auto base = acc.find(baseline);
  if (base == acc.end())
    throw usage_error("aggregate: baseline strategy '" + std::string(baseline) + "' not among the reports");
  const double base_time = base->second.time_sum / static_cast<double>(base->second.n);

  BenchmarkTable table{info.dataset, info.k, 0, info.master_seed, std::string(baseline), {}};
  for (const auto& name : order) {
    const Acc& a = acc.find(name)->second;
    BenchmarkRow row{name, a.phi_sum / static_cast<double>(a.n), a.phi_min,
                     name == baseline ? 1.0 : (a.time_sum / static_cast<double>(a.n)) / base_time, {}};
    if (a.labelled == a.n) row.accuracy = static_cast<double>(a.correct) / static_cast<double>(a.n);
    table.trials = std::max(table.trials, a.n);
    table.rows.push_back(std::move(row));
  }
  return table;
}

/// Three significant digits with a bare exponent: 381000 -> "3.81e5".
inline std::string format_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  std::string s(buf);
  const auto e = s.find('e');
  if (e == std::string::npos) return s;
  std::string mant = s.substr(0, e);
  std::string exp = s.substr(e + 1);
  bool neg = false;
  std::size_t pos = 0;
  if (pos < exp.size() && (exp[pos] == '+' || exp[pos] == '-')) neg = exp[pos++] == '-';
  while (pos + 1 < exp.size() && exp[pos] == '0') ++pos;
  return mant + "e" + (neg ? "-" : "") + exp.substr(pos);
}

enum class TableFormat { Markdown, Csv, Json };

namespace detail {

inline std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string round_trip(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

} // namespace detail

inline nlohmann::json table_to_json(const BenchmarkTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json row{{"strategy", r.strategy},
                       {"avg_phi", r.avg_phi},
                       {"min_phi", r.min_phi},
                       {"time_ratio", r.time_ratio}};
    if (r.accuracy) row["accuracy"] = *r.accuracy;
    rows.push_back(std::move(row));
  }
  return {{"dataset", t.dataset}, {"k", t.k}, {"trials", t.trials}, {"master_seed", t.master_seed},
          {"rows", std::move(rows)}};
}

inline std::string emit_table(const BenchmarkTable& t, TableFormat format) {
  const bool with_acc = t.has_accuracy();
  std::ostringstream os;
  switch (format) {
    case TableFormat::Markdown: {
      os << "Results for " << t.dataset << ", k=" << t.k << ", trials=" << t.trials
         << ", seed=" << t.master_seed << "\n\n";
      os << "| Algorithm | Avg Potential | Min Potential | Time |" << (with_acc ? " Accuracy |" : "") << "\n";
      os << "|---|---|---|---|" << (with_acc ? "---|" : "") << "\n";
      for (const auto& r : t.rows) {
        os << "| " << r.strategy << " | " << format_sci(r.avg_phi) << " | " << format_sci(r.min_phi) << " | "
           << detail::fixed2(r.time_ratio) << " |";
        if (with_acc) os << " " << (r.accuracy ? detail::fixed2(*r.accuracy) : "-") << " |";
        os << "\n";
      }
      break;
    }
    case TableFormat::Csv: {
      os << "dataset,k,trials,master_seed,strategy,avg_phi,min_phi,time_ratio" << (with_acc ? ",accuracy" : "")
         << "\n";
      for (const auto& r : t.rows) {
        os << detail::quote_csv(t.dataset) << ',' << t.k << ',' << t.trials << ',' << t.master_seed << ','
           << detail::quote_csv(r.strategy) << ',' << detail::round_trip(r.avg_phi) << ','
           << detail::round_trip(r.min_phi) << ',' << detail::round_trip(r.time_ratio);
        if (with_acc) os << ',' << (r.accuracy ? detail::round_trip(*r.accuracy) : "");
        os << "\n";
      }
      break;
    }
    case TableFormat::Json:
      os << table_to_json(t).dump(2) << "\n";
      break;
  }
  return os.str();
}

/// Reads back the CSV form written by emit_table. The baseline is not stored
/// there; it is recovered as the row whose time_ratio is exactly 1.
inline BenchmarkTable parse_table_csv(std::string_view text) {
  const auto records = detail::split_csv(text);
  if (records.empty()) throw parse_error("empty table", 0);
  const auto& header = records.front();
  const bool with_acc = header.size() == 9;
  if (header.size() != 8 && !with_acc) throw parse_error("unexpected table header", 1);

  auto num = [](const std::string& s, std::size_t row, std::size_t col, auto& out) {
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
      throw parse_error("not a number: '" + s + "'", row, col);
  };

  BenchmarkTable t;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r];
    if (f.size() != header.size()) throw parse_error("wrong field count", r + 1);
    t.dataset = f[0];
    num(f[1], r + 1, 2, t.k);
    num(f[2], r + 1, 3, t.trials);
    num(f[3], r + 1, 4, t.master_seed);
    BenchmarkRow row;
    row.strategy = f[4];
    num(f[5], r + 1, 6, row.avg_phi);
    num(f[6], r + 1, 7, row.min_phi);
    num(f[7], r + 1, 8, row.time_ratio);
    if (with_acc && !f[8].empty()) {
      double a = 0.0;
      num(f[8], r + 1, 9, a);
      row.accuracy = a;
    }
    if (t.baseline.empty() && row.time_ratio == 1.0) t.baseline = row.strategy;
    t.rows.push_back(std::move(row));
  }
  return t;
}

} // namespace kmpp
