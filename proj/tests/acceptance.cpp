// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number
// of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <kmpp/cli.hpp>
#include <kmpp/kmpp.hpp>

using namespace kmpp;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double time_limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < time_limit_s;
  const bool pass = o.ok && in_time;
  if (!pass) ++failures;
  std::printf("[%s] AC%d %s: %s (%.2f s, limit %.0f s)%s\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(),
              secs, time_limit_s, in_time ? "" : " TIME LIMIT EXCEEDED");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::vector<SeedingStrategy> k_all{SeedingStrategy::uniform(), SeedingStrategy::dsquared(),
                                         SeedingStrategy::top_fraction(0.5), SeedingStrategy::farthest(),
                                         SeedingStrategy::norandom()};

std::vector<Point> gaussian_points(std::mt19937_64& gen, std::size_t n, std::size_t d, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<Point> pts(n, Point(d));
  for (auto& p : pts)
    for (auto& v : p) v = g(gen);
  return pts;
}

// Small instances for the exact oracle: N <= 12, k in {2, 3}.
struct SmallInstance {
  Dataset data;
  std::size_t k;
};

std::vector<SmallInstance> small_instances() {
  std::vector<SmallInstance> out;
  out.push_back({synth_mixture(2, 6, 5.0, 2, 1), 2});
  out.push_back({synth_mixture(3, 4, 6.0, 2, 2), 3});
  out.push_back({synth_mixture(3, 4, 2.0, 3, 3), 3});
  out.push_back({synth_mixture(2, 5, 1.5, 1, 4), 2});
  std::mt19937_64 gen(5);
  out.push_back({Dataset(gaussian_points(gen, 11, 2, 3.0)), 3});
  out.push_back({Dataset(gaussian_points(gen, 9, 4, 1.0)), 2});
  std::vector<Point> line;
  for (double x : {0.0, 1.0, 9.0, 10.0, 20.0, 21.0, 22.0}) line.push_back({x});
  out.push_back({Dataset(line), 3});
  return out;
}

bool within_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

} // namespace

int main() {
  std::printf("kmpp acceptance suite\n");

  criterion(1, "centroid displacement identity", 1.0, [] {
    std::mt19937_64 gen(101);
    double worst = 0.0;
    int bad = 0;
    const int fixtures = 1000;
    for (int rep = 0; rep < fixtures; ++rep) {
      const std::size_t n = 1 + gen() % 50, d = 1 + gen() % 10;
      const auto S = gaussian_points(gen, n, d, 1.0 + static_cast<double>(gen() % 100));
      const auto z = gaussian_points(gen, 1, d, 50.0).front();
      const auto g = lemma1_gap(S, z);
      const double rel = std::abs(g.lhs - g.rhs) / std::max({std::abs(g.lhs), std::abs(g.rhs), 1e-300});
      worst = std::max(worst, rel);
      if (!within_rel(g.lhs, g.rhs, 1e-9)) ++bad;
    }
    return Outcome{bad == 0, fmt("%d fixtures, %d violations, worst relative gap %.2e (tol 1e-9)", fixtures, bad, worst)};
  });

  criterion(2, "monotone descent and per-step improvement bound", 10.0, [] {
    std::size_t steps = 0, bound_viol = 0, trace_viol = 0, runs = 0, unconverged = 0;
    double min_slack = INFINITY;
    auto check = [&](const Dataset& X, std::size_t k, const SeedingStrategy& s, std::uint64_t seed) {
      Rng rng(seed);
      const auto C0 = seed_centers(X, k, s, rng);
      const auto r = run_lloyd(X, C0, {}, [&](const auto& before, const auto& after) {
        ++steps;
        const auto imp = step_improvement_bound(X, before, after);
        min_slack = std::min(min_slack, imp.actual_drop - imp.bound);
        if (imp.actual_drop < imp.bound - 1e-9) ++bound_viol;
      });
      ++runs;
      if (!r.converged) ++unconverged;
      for (std::size_t i = 1; i < r.potential_trace.size(); ++i)
        if (r.potential_trace[i] > r.potential_trace[i - 1] + 1e-9) ++trace_viol;
    };
    const std::pair<const char*, std::size_t> bundled[] = {{"iris", 3}, {"wine", 10}, {"blobs20", 20}, {"blobs10", 10}};
    for (auto [name, k] : bundled) {
      const auto X = load_fixture(name);
      for (const auto& s : k_all)
        for (std::uint64_t seed = 0; seed < 3; ++seed) check(X, k, s, seed);
    }
    std::mt19937_64 gen(202);
    for (int rep = 0; rep < 100; ++rep) {
      const std::size_t clusters = 2 + gen() % 6;
      const auto X = synth_mixture(clusters, 10 + gen() % 30, 1.0 + static_cast<double>(gen() % 8), 1 + gen() % 5,
                                   gen());
      check(X, 1 + gen() % (clusters + 2), k_all[rep % k_all.size()], rep);
    }
    const bool ok = bound_viol == 0 && trace_viol == 0 && unconverged == 0;
    return Outcome{ok, fmt("%zu runs, %zu steps, %zu bound violations, %zu trace increases, %zu unconverged, "
                           "min slack %.3e",
                           runs, steps, bound_viol, trace_viol, unconverged, min_slack)};
  });

  criterion(3, "D^2 seeding expected potential within 8(ln k + 2) of optimum", 30.0, [] {
    std::ostringstream detail;
    bool ok = true;
    int count = 0;
    for (auto& inst : small_instances()) {
      const auto r = competitive_ratio(inst.data, inst.k, SeedingStrategy::dsquared(), 10000);
      const double bound = 8.0 * (std::log(static_cast<double>(inst.k)) + 2.0);
      const double upper = r.ratio + 3.0 * r.std_error / r.phi_opt;
      ok = ok && upper <= bound;
      detail << (count++ ? "; " : "") << fmt("N=%zu k=%zu ratio %.3f+3se=%.3f <= %.2f", inst.data.size(), inst.k,
                                             r.ratio, upper, bound);
    }
    return Outcome{ok && count >= 5, detail.str()};
  });

  criterion(4, "top-fraction reductions (alpha = 1 and subset size 1)", 1.0, [] {
    std::mt19937_64 gen(404);
    int alpha_one_mismatch = 0, point_mass_mismatch = 0, seed_mismatch = 0;
    for (int rep = 0; rep < 100; ++rep) {
      auto pts = gaussian_points(gen, 5 + gen() % 60, 1 + gen() % 6, 4.0);
      for (std::size_t i = 2; i < pts.size(); i += 5) pts[i] = pts[i - 2];
      const Dataset X(pts);
      Rng rng(rep);
      const std::size_t k = 1 + gen() % 4;
      CenterSet C(X.dim(), k);
      C.push_back(X[rng.index(X.size())]);
      grow_centers(X, C, k, SeedingStrategy::dsquared(), rng);
      std::vector<double> d2(X.size());
      for (std::size_t i = 0; i < X.size(); ++i) d2[i] = nearest_center(X[i], C).d_squared;

      if (next_center_distribution(X, C, SeedingStrategy::top_fraction(1.0)) !=
          next_center_distribution(X, C, SeedingStrategy::dsquared()))
        ++alpha_one_mismatch;
      if (top_subset_distribution(d2, 1) != next_center_distribution(X, C, SeedingStrategy::farthest()))
        ++point_mass_mismatch;
      Rng a(rep), b(rep);
      const std::size_t kk = std::min<std::size_t>(4, count_distinct(X));
      if (!(seed_alpha(X, kk, 1.0, a) == seed_dsquared(X, kk, b))) ++seed_mismatch;
    }
    const bool ok = alpha_one_mismatch == 0 && point_mass_mismatch == 0 && seed_mismatch == 0;
    return Outcome{ok, fmt("100 states: alpha=1 vs D^2 mismatches %d, subset-1 vs farthest mismatches %d, "
                           "seeded-sequence mismatches %d",
                           alpha_one_mismatch, point_mass_mismatch, seed_mismatch)};
  });

  criterion(5, "Iris correct-clustering ratio (uniform <= 0.5, others >= 0.7)", 60.0, [] {
    const auto X = load_fixture("iris");
    const auto reports = run_trials(X, 3, k_all, 1000, 42);
    const auto t = aggregate(reports, "kmeans", {X.name(), 3, 42});
    bool ok = *t.find("kmeans")->accuracy <= 0.5;
    std::ostringstream detail;
    for (const auto& row : t.rows) {
      if (row.strategy != "kmeans") ok = ok && *row.accuracy >= 0.7;
      detail << row.strategy << "=" << fmt("%.3f", *row.accuracy) << " ";
    }
    detail << "(1000 trials each)";
    return Outcome{ok, detail.str()};
  });

  criterion(6, "20-blob mixture: uniform avg >= 2x others, non-uniform min within 5%", 120.0, [] {
    const auto X = load_fixture("blobs20");
    const auto reports = run_trials(X, 20, k_all, 200, 42);
    const auto t = aggregate(reports, "kmeans", {X.name(), 20, 42});
    const double uni = t.find("kmeans")->avg_phi;
    bool ok = true;
    double lo = INFINITY, hi = 0.0;
    std::ostringstream detail;
    detail << "avg kmeans " << format_sci(uni);
    for (const auto& row : t.rows) {
      if (row.strategy == "kmeans") continue;
      ok = ok && uni >= 2.0 * row.avg_phi;
      lo = std::min(lo, row.min_phi);
      hi = std::max(hi, row.min_phi);
      detail << ", " << row.strategy << " " << fmt("%.4g", row.avg_phi) << " (x" << fmt("%.2f", uni / row.avg_phi)
             << ")";
    }
    const double spread = hi / lo - 1.0;
    ok = ok && spread <= 0.05;
    detail << fmt("; non-uniform min spread %.4f%%", 100.0 * spread);
    return Outcome{ok, detail.str()};
  });

  criterion(7, "final potential never below the exact optimum", 10.0, [] {
    std::size_t checked = 0, bad = 0;
    double worst = INFINITY;
    for (auto& inst : small_instances()) {
      const double opt = brute_force_optimal(inst.data, inst.k).phi_opt;
      for (const auto& r : run_trials(inst.data, inst.k, k_all, 200, 7)) {
        ++checked;
        worst = std::min(worst, r.final_phi - opt);
        if (r.final_phi < opt - 1e-9) ++bad;
      }
    }
    return Outcome{bad == 0, fmt("%zu trials, %zu below phi_OPT, min(final - opt) = %.3e", checked, bad, worst)};
  });

  criterion(8, "identical configuration gives bit-identical JSON apart from timing", 60.0, [] {
    std::size_t compared = 0;
    bool ok = true;
    for (std::string fixture : {"iris", "wine", "blobs20"}) {
      const std::vector<std::string> args{"bench", "--fixture", fixture, "--k", fixture == "blobs20" ? "20" : "3",
                                          "--trials", "100", "--seed", "1234", "--format", "json"};
      std::string runs[2];
      for (auto& text : runs) {
        std::ostringstream out, err;
        if (run_cli(args, out, err) != 0) return Outcome{false, "cli failed: " + err.str()};
        auto j = nlohmann::json::parse(out.str());
        for (auto& row : j["rows"]) row.erase("time_ratio");
        text = j.dump();
      }
      ok = ok && runs[0] == runs[1];
      ++compared;
    }
    return Outcome{ok, fmt("%zu configurations compared, %s", compared, ok ? "all identical" : "MISMATCH")};
  });

  std::printf("%d criterion/criteria failed\n", failures);
  return failures;
}
