#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rrank/io.hpp"
#include "support.hpp"

using namespace rrank;
using testsupport::make_dm;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path tmp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "rrank_io_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("decision matrix CSV round-trips") {
  const auto dm = make_dm(3, 2, {1.5, 2.25, 3.125, 4.0, 0.001, 62.5});
  std::stringstream buf;
  io::write_decision_matrix(buf, dm);
  const auto back = io::read_decision_matrix(buf);
  CHECK(back.alternatives == dm.alternatives);
  CHECK(back.criteria == dm.criteria);
  CHECK(back.values == dm.values);
}

TEST_CASE("identifiers with commas and quotes survive the round trip") {
  const auto dm = validate_matrix({"Korea, South", "a \"b\""}, {"g,1", "g2"}, {1, 2, 3, 4});
  std::stringstream buf;
  io::write_decision_matrix(buf, dm);
  const auto back = io::read_decision_matrix(buf);
  CHECK(back.alternatives == dm.alternatives);
  CHECK(back.criteria == dm.criteria);
}

TEST_CASE("header-only CSV is rejected as too small") {
  std::stringstream buf("name,g1,g2\n");
  try {
    io::read_decision_matrix(buf);
    FAIL("expected too_few_rows_or_cols");
  } catch (const Error& e) {
    CHECK(e.code() == errc::too_few_rows_or_cols);
  }
}

TEST_CASE("empty cells surface as non-finite entries") {
  std::stringstream buf("name,g1,g2\na,1,\nb,2,3\n");
  try {
    io::read_decision_matrix(buf);
    FAIL("expected non_finite");
  } catch (const Error& e) {
    CHECK(e.code() == errc::non_finite);
  }
}

TEST_CASE("unparseable cells are parse errors with a line number") {
  std::stringstream buf("name,g1,g2\na,1,2\nb,x7,3\n");
  try {
    io::read_decision_matrix(buf);
    FAIL("expected parse_error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::parse_error);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("ragged rows are parse errors") {
  std::stringstream buf("name,g1,g2\na,1\n");
  CHECK_THROWS_AS(io::read_decision_matrix(buf), Error);
}

TEST_CASE("min-max normalization rescales each column onto [0,1]") {
  std::stringstream buf("name,g1,g2\na,0,5\nb,50,6\nc,100,7\n");
  const auto dm = io::read_decision_matrix(buf, /*normalize=*/true);
  CHECK(dm.at(0, 0) == 0.0);
  CHECK(dm.at(1, 0) == 0.5);
  CHECK(dm.at(2, 0) == 1.0);
  CHECK(dm.at(0, 1) == 0.0);
  CHECK(dm.at(2, 1) == 1.0);
}

TEST_CASE("normalization rejects constant columns") {
  std::stringstream buf("name,g1,g2\na,1,5\nb,2,5\n");
  try {
    io::read_decision_matrix(buf, true);
    FAIL("expected zero_variance");
  } catch (const Error& e) {
    CHECK(e.code() == errc::zero_variance);
  }
}

TEST_CASE("emission is deterministic byte for byte") {
  SplitMix64 rng(71);
  const auto dm = testsupport::random_dm(6, 3, rng);
  const auto rho = pearson_matrix(dm);
  const auto dir = tmp_dir();
  const auto p1 = (dir / "c1.csv").string();
  const auto p2 = (dir / "c2.csv").string();
  io::write_correlation(p1, dm.criteria, rho);
  io::write_correlation(p2, dm.criteria, rho);
  CHECK(slurp(p1) == slurp(p2));

  SmaaConfig cfg;
  cfg.samples = 200;
  const auto res = run_smaa(dm, cfg);
  const auto j1 = (dir / "cw1.json").string();
  const auto j2 = (dir / "cw2.json").string();
  io::write_json(j1, io::central_weights_json(dm.alternatives, dm.criteria, res));
  io::write_json(j2, io::central_weights_json(dm.alternatives, dm.criteria, res));
  CHECK(slurp(j1) == slurp(j2));
}

TEST_CASE("pairwise matrices round-trip through CSV") {
  SplitMix64 rng(72);
  const auto dm = testsupport::random_dm(5, 3, rng);
  SmaaConfig cfg;
  cfg.samples = 500;
  const auto res = run_smaa(dm, cfg);
  const auto path = (tmp_dir() / "pairwise.csv").string();
  io::write_pairwise(path, dm.alternatives, res.pairwise);
  std::vector<std::string> labels;
  const auto back = io::read_pairwise(path, &labels);
  CHECK(labels == dm.alternatives);
  REQUIRE(back.m == res.pairwise.m);
  for (std::size_t i = 0; i < back.c.size(); ++i)
    REQUIRE(back.c[i] == Catch::Approx(res.pairwise.c[i]).margin(1e-6));
}

TEST_CASE("rankings round-trip through CSV") {
  const auto ranking = ranking_from_order({2, 0, 1});
  const std::vector<std::string> names = {"alpha", "beta", "gamma"};
  const auto path = (tmp_dir() / "ranking.csv").string();
  io::write_ranking(path, names, ranking);
  const auto back = io::read_ranking_names(path);
  CHECK(back == std::vector<std::string>{"gamma", "alpha", "beta"});
}

TEST_CASE("correlation files round-trip") {
  SplitMix64 rng(73);
  const auto dm = testsupport::random_dm(8, 4, rng);
  const auto rho = pearson_matrix(dm);
  const auto path = (tmp_dir() / "rho.csv").string();
  io::write_correlation(path, dm.criteria, rho);
  std::vector<std::string> labels;
  const auto back = io::read_correlation(path, &labels);
  CHECK(labels == dm.criteria);
  for (std::size_t i = 0; i < back.rho.size(); ++i)
    REQUIRE(back.rho[i] == Catch::Approx(rho.rho[i]).margin(1e-6));
}

TEST_CASE("format_g6 keeps six significant digits") {
  CHECK(io::format_g6(0.21253456789) == "0.212535");
  CHECK(io::format_g6(1.0) == "1");
  CHECK(io::format_g6(-0.0285) == "-0.0285");
}
