#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "bench.hpp"
#include "error.hpp"
#include "io.hpp"
#include "seeding.hpp"

namespace kmpp {

struct CliConfig {
  DatasetSpec dataset;
  std::size_t k = 0;
  std::size_t trials = 100;
  std::vector<std::string> strategies;
  std::uint64_t master_seed = 42;
  TableFormat format = TableFormat::Markdown;
  std::string out_path;
  double correctness_threshold = k_default_correctness_threshold;
  std::size_t max_iterations = 300;
  bool standardize = false;
  unsigned threads = 1;
  std::string baseline;
};

inline constexpr std::string_view k_default_algos = "kmeans,kmeans++,alpha:eps,norandom,alpha:0.5";

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = std::min(s.find(',', start), s.size());
    auto item = s.substr(start, comma - start);
    if (!item.empty()) out.emplace_back(item);
    start = comma + 1;
  }
  return out;
}

/// Everything a validated benchmark needs, built before any clustering runs.
struct PreparedRun {
  Dataset data;
  std::vector<SeedingStrategy> strategies;
  std::string baseline;
};

inline PreparedRun prepare_run(const CliConfig& cfg) {
  if (cfg.k < 1) throw usage_error("--k must be >= 1");
  if (cfg.trials < 1) throw usage_error("--trials must be >= 1");
  if (cfg.max_iterations < 1) throw usage_error("--max-iters must be >= 1");
  if (cfg.strategies.empty()) throw usage_error("--algos must name at least one strategy");
  if (!(cfg.correctness_threshold >= 0.0 && cfg.correctness_threshold <= 1.0))
    throw usage_error("--alpha-threshold must lie in [0, 1]");

  std::vector<SeedingStrategy> strategies;
  std::vector<std::string> names;
  for (const auto& s : cfg.strategies) {
    strategies.push_back(parse_strategy(s));
    names.push_back(strategy_name(strategies.back()));
    if (std::count(names.begin(), names.end(), names.back()) > 1)
      throw usage_error("strategy '" + s + "' listed twice");
  }

  Dataset data = load_csv(cfg.dataset);
  if (cfg.standardize) data = standardize(data);
  for (const auto& s : strategies) validate_strategy(s, data.size());
  const std::size_t distinct = count_distinct(data);
  if (cfg.k > distinct)
    throw usage_error("--k " + std::to_string(cfg.k) + " exceeds the " + std::to_string(distinct) +
                      " distinct points of dataset '" + data.name() + "'");

  std::string baseline = cfg.baseline;
  if (baseline.empty()) {
    baseline = std::find(names.begin(), names.end(), "kmeans") != names.end() ? "kmeans" : names.front();
  } else {
    baseline = strategy_name(parse_strategy(baseline));
    if (std::find(names.begin(), names.end(), baseline) == names.end())
      throw usage_error("--baseline '" + cfg.baseline + "' is not among --algos");
  }
  return {std::move(data), std::move(strategies), std::move(baseline)};
}

/// Runs a validated configuration and returns the aggregated table.
inline BenchmarkTable run_benchmark(const CliConfig& cfg) {
  const PreparedRun run = prepare_run(cfg);
  TrialOptions opt;
  opt.lloyd.max_iterations = cfg.max_iterations;
  opt.correctness_threshold = cfg.correctness_threshold;
  opt.threads = cfg.threads;
  const auto reports = run_trials(run.data, cfg.k, run.strategies, cfg.trials, cfg.master_seed, opt);
  return aggregate(reports, run.baseline, {run.data.name(), cfg.k, cfg.master_seed});
}

namespace detail {

inline void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

} // namespace detail

/// Entry point for the kmbench tool. args excludes the program name. Returns 0
/// on success, 2 on usage errors, 1 on data or I/O errors.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"k-means seeding benchmark: Lloyd iterations from uniform, D^2, top-fraction, "
               "farthest-point and no-random initializations"};
  app.name("kmbench");
  app.require_subcommand(1);

  CliConfig cfg;
  std::string data_path, fixture, label_col, format = "md", algos(k_default_algos);
  std::string delimiter = ",";

  auto* bench = app.add_subcommand("bench", "Run repeated seeding + Lloyd trials and print a result table");
  auto* data_opt = bench->add_option("--data", data_path, "CSV dataset path");
  auto* fix_opt = bench->add_option("--fixture", fixture, "Builtin dataset: iris, wine, blobs20, blobs10");
  data_opt->excludes(fix_opt);
  bench->add_option("--label-col", label_col, "Label column: first, last or none (fixtures: last)")
      ->check(CLI::IsMember({"first", "last", "none"}));
  bench->add_option("--k", cfg.k, "Number of clusters")->required();
  bench->add_option("--trials", cfg.trials, "Independent trials per strategy")->capture_default_str();
  bench->add_option("--algos", algos, "Comma-separated strategies: kmeans, kmeans++, alpha:<float>, alpha:eps, norandom")
      ->capture_default_str();
  bench->add_option("--seed", cfg.master_seed, "Master seed")->capture_default_str();
  bench->add_option("--alpha-threshold", cfg.correctness_threshold,
                    "Agreement needed for a trial to count as a correct clustering")
      ->capture_default_str();
  bench->add_option("--max-iters", cfg.max_iterations, "Lloyd iteration cap")->capture_default_str();
  bench->add_flag("--standardize", cfg.standardize, "Z-score every feature column before clustering");
  bench->add_option("--format", format, "Output format: md, csv or json")
      ->check(CLI::IsMember({"md", "csv", "json"}))
      ->capture_default_str();
  bench->add_option("--out", cfg.out_path, "Write the table here instead of stdout");
  bench->add_option("--delimiter", delimiter, "CSV field delimiter (single character)")->capture_default_str();
  bench->add_flag("--skip-header", cfg.dataset.skip_header, "Ignore the first CSV row");
  bench->add_option("--threads", cfg.threads, "Worker threads for trials")->capture_default_str();
  bench->add_option("--baseline", cfg.baseline, "Strategy used for time normalization (default kmeans)");

  std::string export_fixture, export_out;
  auto* exp = app.add_subcommand("export", "Write a builtin dataset as CSV (label last)");
  exp->add_option("fixture", export_fixture, "Fixture name")->required();
  exp->add_option("--out", export_out, "Output path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (exp->parsed()) {
      detail::write_output(dataset_to_csv(load_fixture(export_fixture)), export_out, out);
      return 0;
    }

    if (data_path.empty() == fixture.empty()) throw usage_error("exactly one of --data or --fixture is required");
    if (delimiter.size() != 1) throw usage_error("--delimiter must be a single character");
    cfg.dataset.fixture = !fixture.empty();
    cfg.dataset.path = cfg.dataset.fixture ? fixture : data_path;
    cfg.dataset.delimiter = delimiter[0];
    if (!label_col.empty()) {
      if (cfg.dataset.fixture && label_col != "last")
        throw usage_error("fixtures carry their labels in the last column");
      cfg.dataset.label_column = parse_label_column(label_col);
    } else {
      cfg.dataset.label_column = cfg.dataset.fixture ? LabelColumn::Last : LabelColumn::None;
    }
    cfg.strategies = split_list(algos);
    cfg.format = format == "csv" ? TableFormat::Csv : format == "json" ? TableFormat::Json : TableFormat::Markdown;

    const BenchmarkTable table = run_benchmark(cfg);
    detail::write_output(emit_table(table, cfg.format), cfg.out_path, out);
    return 0;
  } catch (const usage_error& e) {
    err << "kmbench: usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "kmbench: error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace kmpp
