#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <kmpp/cli.hpp>

using namespace kmpp;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

const std::string k_iris = std::string(KMPP_DATA_DIR) + "/iris.csv";

} // namespace

TEST_CASE("json report for two strategies on the Iris file") {
  const auto r = cli({"bench", "--data", k_iris, "--skip-header", "--label-col", "last", "--k", "3", "--trials",
                      "20", "--algos", "kmeans,kmeans++", "--seed", "7", "--format", "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["dataset"] == "iris");
  CHECK(j["k"] == 3);
  CHECK(j["trials"] == 20);
  CHECK(j["master_seed"] == 7);
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["strategy"] == "kmeans");
  CHECK(j["rows"][0]["time_ratio"] == 1.0);
  CHECK(j["rows"][1]["strategy"] == "kmeans++");
  for (const auto& row : j["rows"]) {
    CHECK(row.contains("accuracy"));
    CHECK(row["min_phi"].get<double>() <= row["avg_phi"].get<double>());
  }
}

TEST_CASE("alpha:eps selects the farthest-point strategy") {
  const auto r = cli({"bench", "--fixture", "iris", "--k", "3", "--trials", "3", "--algos", "alpha:eps", "--format",
                      "csv"});
  REQUIRE(r.status == 0);
  CHECK(parse_table_csv(r.out).rows.at(0).strategy == "alpha:eps");
}

TEST_CASE("invalid strategies fail before any computation") {
  auto r = cli({"bench", "--fixture", "iris", "--k", "3", "--algos", "alpha:0"});
  CHECK(r.status == 2);
  CHECK(r.err.find("(1/N, 1]") != std::string::npos);
  CHECK(r.out.empty());

  r = cli({"bench", "--fixture", "iris", "--k", "3", "--algos", "alpha:1.5"});
  CHECK(r.status == 2);
  r = cli({"bench", "--fixture", "iris", "--k", "3", "--algos", "alpha:0.005"});
  CHECK(r.status == 2);
  r = cli({"bench", "--fixture", "iris", "--k", "3", "--algos", "kmeans,kmedoids"});
  CHECK(r.status == 2);
  CHECK(r.err.find("unknown strategy 'kmedoids'") != std::string::npos);
  r = cli({"bench", "--fixture", "iris", "--k", "3", "--algos", "kmeans,kmeans"});
  CHECK(r.status == 2);
}

TEST_CASE("k beyond distinct points is rejected") {
  const auto path = std::filesystem::temp_directory_path() / "kmpp_cli_dups.csv";
  std::ofstream(path) << "1,1\n1,1\n2,2\n";
  const auto r = cli({"bench", "--data", path.string(), "--k", "3", "--algos", "kmeans"});
  CHECK(r.status == 2);
  CHECK(r.err.find("distinct") != std::string::npos);
}

TEST_CASE("argument errors") {
  CHECK(cli({"bench", "--fixture", "iris"}).status != 0);
  CHECK(cli({"bench", "--k", "3"}).status == 2);
  CHECK(cli({"bench", "--fixture", "iris", "--data", k_iris, "--k", "3"}).status != 0);
  CHECK(cli({"bench", "--fixture", "iris", "--k", "3", "--format", "xml"}).status != 0);
  CHECK(cli({"bench", "--fixture", "iris", "--k", "0"}).status == 2);
  CHECK(cli({"bench", "--fixture", "iris", "--k", "3", "--trials", "0"}).status == 2);
  CHECK(cli({"bench", "--fixture", "nope", "--k", "3"}).status == 2);
  CHECK(cli({"bench", "--data", "/no/such/file.csv", "--k", "3"}).status == 1);
  CHECK(cli({}).status != 0);
}

TEST_CASE("help lists every flag") {
  const auto r = cli({"bench", "--help"});
  CHECK(r.status == 0);
  for (const char* flag : {"--data", "--fixture", "--label-col", "--k", "--trials", "--algos", "--seed",
                           "--alpha-threshold", "--max-iters", "--standardize", "--format", "--out"})
    CHECK(r.out.find(flag) != std::string::npos);
}

TEST_CASE("markdown to a file, unlabeled data has no accuracy column") {
  const auto data = std::filesystem::temp_directory_path() / "kmpp_cli_plain.csv";
  std::ofstream(data) << "0\n1\n9\n10\n";
  const auto out = std::filesystem::temp_directory_path() / "kmpp_cli_table.md";
  std::filesystem::remove(out);
  const auto r = cli({"bench", "--data", data.string(), "--k", "2", "--trials", "5", "--out", out.string()});
  REQUIRE(r.status == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("| Algorithm | Avg Potential | Min Potential | Time |\n") != std::string::npos);
  CHECK(text.find("Accuracy") == std::string::npos);
  CHECK(text.find("| kmeans | 1.00e0 | 1.00e0 | 1.00 |") != std::string::npos);
}

TEST_CASE("standardize flag and export subcommand") {
  auto r = cli({"bench", "--fixture", "wine", "--k", "3", "--trials", "5", "--algos", "kmeans++", "--standardize",
                "--format", "json"});
  REQUIRE(r.status == 0);
  const double standardized = nlohmann::json::parse(r.out)["rows"][0]["min_phi"];
  r = cli({"bench", "--fixture", "wine", "--k", "3", "--trials", "5", "--algos", "kmeans++", "--format", "json"});
  const double raw = nlohmann::json::parse(r.out)["rows"][0]["min_phi"];
  CHECK(standardized < raw);

  r = cli({"export", "iris"});
  REQUIRE(r.status == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 150);
}

TEST_CASE("identical configuration gives identical reports apart from timing") {
  const std::vector<std::string> args{"bench", "--fixture", "blobs20", "--k", "20", "--trials", "5", "--seed", "3",
                                      "--format", "json"};
  auto a = nlohmann::json::parse(cli(args).out);
  auto b = nlohmann::json::parse(cli(args).out);
  for (auto* j : {&a, &b})
    for (auto& row : (*j)["rows"]) row.erase("time_ratio");
  CHECK(a.dump() == b.dump());
}
