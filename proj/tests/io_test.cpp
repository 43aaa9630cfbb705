#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>

#include <kmpp/io.hpp>
#include <kmpp/oracle.hpp>

using namespace kmpp;
using Catch::Matchers::WithinAbs;

namespace {

DatasetSpec spec(LabelColumn label, bool header = false, char delim = ',') {
  DatasetSpec s;
  s.label_column = label;
  s.skip_header = header;
  s.delimiter = delim;
  return s;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / ("kmpp_io_" + name);
  std::ofstream(p, std::ios::binary) << body;
  return p;
}

} // namespace

TEST_CASE("labels in the last column") {
  const auto X = parse_dataset("1,2,a\n3,4,b\n5,6,a\n", spec(LabelColumn::Last));
  CHECK(X.size() == 3);
  CHECK(X.dim() == 2);
  CHECK(*X.labels() == std::vector<std::string>{"a", "b", "a"});
  CHECK(X[1][0] == 3.0);
  CHECK(X[1][1] == 4.0);
}

TEST_CASE("labels in the first column, quoted fields, CRLF, other delimiters") {
  const auto X = parse_dataset("\"class, one\";1.5;-2e3\r\nb;+0.25; 7 \r\n", spec(LabelColumn::First, false, ';'));
  CHECK(X.dim() == 2);
  CHECK((*X.labels())[0] == "class, one");
  CHECK(X[0][1] == -2000.0);
  CHECK(X[1][0] == 0.25);
  CHECK(X[1][1] == 7.0);
}

TEST_CASE("no label column") {
  const auto X = parse_dataset("1,2\n3,4\n", spec(LabelColumn::None));
  CHECK_FALSE(X.has_labels());
  CHECK(X.dim() == 2);
}

TEST_CASE("header row can be skipped") {
  const auto X = parse_dataset("x,y,label\n1,2,a\n", spec(LabelColumn::Last, true));
  CHECK(X.size() == 1);
  CHECK_THROWS_AS(parse_dataset("x,y,label\n1,2,a\n", spec(LabelColumn::Last)), parse_error);
}

TEST_CASE("malformed rows report their position") {
  try {
    parse_dataset("1,2,a\n3,b,c\n", spec(LabelColumn::Last));
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.row() == 2);
    CHECK(e.column() == 2);
  }
  try {
    parse_dataset("1,2\n3,4\n5\n", spec(LabelColumn::None));
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.row() == 3);
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_dataset("1,,2\n", spec(LabelColumn::None)), parse_error);
  CHECK_THROWS_AS(parse_dataset("1,nan\n", spec(LabelColumn::None)), parse_error);
  CHECK_THROWS_AS(parse_dataset("1,inf\n", spec(LabelColumn::None)), parse_error);
  CHECK_THROWS_AS(parse_dataset("1,1e999\n", spec(LabelColumn::None)), parse_error);
  CHECK_THROWS_AS(parse_dataset("1,\"2\n", spec(LabelColumn::None)), parse_error);
  CHECK_THROWS_AS(parse_dataset("1,\"2\"x\n", spec(LabelColumn::None)), parse_error);
  CHECK_THROWS_AS(parse_dataset("a\nb\n", spec(LabelColumn::Last)), parse_error);
  CHECK_THROWS_AS(parse_dataset("", spec(LabelColumn::None)), parse_error);
  CHECK_THROWS_AS(parse_dataset("\n\n", spec(LabelColumn::None)), parse_error);
}

TEST_CASE("blank line inside data is a ragged row") {
  CHECK_THROWS_AS(parse_dataset("1,2\n\n3,4\n", spec(LabelColumn::None)), parse_error);
}

TEST_CASE("load_csv file errors") {
  DatasetSpec s = spec(LabelColumn::None);
  s.path = "/nonexistent/kmpp/data.csv";
  CHECK_THROWS_AS(load_csv(s), parse_error);
  s.path = temp_file("empty.csv", "  \n").string();
  CHECK_THROWS_AS(load_csv(s), parse_error);
  s.path = temp_file("ok.csv", "1,2\n3,4\n").string();
  const auto X = load_csv(s);
  CHECK(X.size() == 2);
  CHECK(X.name() == "kmpp_io_ok");
}

TEST_CASE("bundled Iris fixture") {
  const auto X = load_fixture("iris");
  CHECK(X.size() == 150);
  CHECK(X.dim() == 4);
  const std::set<std::string> classes(X.labels()->begin(), X.labels()->end());
  CHECK(classes == std::set<std::string>{"setosa", "versicolor", "virginica"});
  CHECK(X[0][0] == 5.1);
}

TEST_CASE("bundled wine fixture and synthetic stand-ins") {
  const auto W = load_fixture("wine");
  CHECK(W.size() == 178);
  CHECK(W.dim() == 13);
  const auto B = load_fixture("blobs20");
  CHECK(B.size() == 1200);
  const auto S = load_fixture("blobs10");
  CHECK(S.size() == 1200);
  CHECK(S.dim() == 57);
  CHECK_THROWS_AS(load_fixture("spam"), usage_error);
}

TEST_CASE("synth_mixture is deterministic and labelled by blob") {
  CHECK(dataset_to_csv(synth_mixture(3, 7, 5.0, 4, 9)) == dataset_to_csv(synth_mixture(3, 7, 5.0, 4, 9)));
  CHECK(dataset_to_csv(synth_mixture(3, 7, 5.0, 4, 9)) != dataset_to_csv(synth_mixture(3, 7, 5.0, 4, 10)));

  const auto one = synth_mixture(1, 12, 1.0, 3, 0);
  CHECK(std::set<std::string>(one.labels()->begin(), one.labels()->end()).size() == 1);
  CHECK_THROWS_AS(synth_mixture(0, 1, 1.0, 1, 0), usage_error);
  CHECK_THROWS_AS(synth_mixture(1, 1, 0.0, 1, 0), usage_error);
}

TEST_CASE("synth_mixture blob centers are separation apart") {
  // simplex layout: many samples, means approach (sep / sqrt 2) e_i
  const auto X = synth_mixture(3, 4000, 10.0, 3, 4);
  for (std::size_t c = 0; c < 3; ++c) {
    Point mean(3, 0.0);
    for (std::size_t i = c * 4000; i < (c + 1) * 4000; ++i)
      for (std::size_t j = 0; j < 3; ++j) mean[j] += X[i][j] / 4000.0;
    for (std::size_t j = 0; j < 3; ++j) CHECK_THAT(mean[j], WithinAbs(j == c ? 10.0 / std::sqrt(2.0) : 0.0, 0.1));
  }
}

TEST_CASE("well-separated pair is recovered by the oracle") {
  const auto X = synth_mixture(2, 5, 100.0, 2, 3);
  const auto opt = brute_force_optimal(X, 2);
  for (std::size_t i = 0; i < 10; ++i) CHECK(opt.best_assignment[i] == opt.best_assignment[(i / 5) * 5]);
  CHECK(opt.best_assignment[0] != opt.best_assignment[5]);
}

TEST_CASE("standardize gives zero mean and unit variance") {
  const auto Z = standardize(load_fixture("wine"));
  for (std::size_t j = 0; j < Z.dim(); ++j) {
    double m = 0.0, v = 0.0;
    for (std::size_t i = 0; i < Z.size(); ++i) m += Z[i][j];
    m /= Z.size();
    for (std::size_t i = 0; i < Z.size(); ++i) v += (Z[i][j] - m) * (Z[i][j] - m);
    CHECK_THAT(m, WithinAbs(0.0, 1e-12));
    CHECK_THAT(v / Z.size(), WithinAbs(1.0, 1e-12));
  }
  const auto C = standardize(Dataset({{1.0, 2.0}, {1.0, 4.0}}));
  CHECK(C[0][0] == 0.0);
  CHECK(C[1][1] == 1.0);
}

TEST_CASE("dataset_to_csv round-trips through the parser") {
  const auto X = synth_mixture(4, 9, 3.0, 5, 77);
  CHECK(parse_dataset(dataset_to_csv(X), spec(LabelColumn::Last), X.name()) == X);
}
