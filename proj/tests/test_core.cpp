#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <vector>

#include "rrank/core.hpp"
#include "support.hpp"

using namespace rrank;
using testsupport::make_dm;

TEST_CASE("validate_matrix accepts a full-size table") {
  std::vector<double> values(62 * 7);
  SplitMix64 rng(1);
  for (double& v : values) v = 100.0 * rng.next_double();
  const auto dm = make_dm(62, 7, values);
  CHECK(dm.m() == 62);
  CHECK(dm.n() == 7);
}

TEST_CASE("validate_matrix rejects undersized tables") {
  CHECK_THROWS_MATCHES(make_dm(1, 7, std::vector<double>(7, 1.0)), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::too_few_rows_or_cols;
                       }));
  CHECK_THROWS_AS(make_dm(3, 1, std::vector<double>(3, 1.0)), Error);
}

TEST_CASE("validate_matrix rejects missing entries") {
  std::vector<double> values = {1, 2, 3, std::numeric_limits<double>::quiet_NaN()};
  try {
    make_dm(2, 2, values);
    FAIL("expected non_finite");
  } catch (const Error& e) {
    CHECK(e.code() == errc::non_finite);
  }
}

TEST_CASE("validate_matrix rejects duplicate identifiers") {
  try {
    validate_matrix({"x", "x"}, {"g1", "g2"}, {1, 2, 3, 4});
    FAIL("expected duplicate_identifier");
  } catch (const Error& e) {
    CHECK(e.code() == errc::duplicate_identifier);
  }
}

TEST_CASE("ranking_from_scores sorts by descending score") {
  const auto r = ranking_from_scores(ScoreVector{{0.2, 0.9, 0.5}});
  CHECK(r.order == std::vector<int>{1, 2, 0});
  CHECK(r.position == std::vector<int>{2, 0, 1});
}

TEST_CASE("ranking_from_scores breaks ties by alternative index") {
  const auto r = ranking_from_scores(ScoreVector{{0.5, 0.5}});
  CHECK(r.order == std::vector<int>{0, 1});
}

TEST_CASE("order and position stay mutually inverse on random scores") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + rng.next() % 40;
    ScoreVector s;
    for (std::size_t i = 0; i < m; ++i) s.s.push_back(rng.next_double());
    const auto r = ranking_from_scores(s);
    for (std::size_t rank = 0; rank < m; ++rank)
      REQUIRE(r.position[r.order[rank]] == static_cast<int>(rank));
  }
}

TEST_CASE("permuting alternatives permutes the ranking consistently") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 3 + rng.next() % 20;
    ScoreVector s;
    for (std::size_t i = 0; i < m; ++i)
      s.s.push_back(static_cast<double>(rng.next() % 100000));  // distinct with high probability
    bool distinct = true;
    for (std::size_t i = 0; i < m && distinct; ++i)
      for (std::size_t k = i + 1; k < m; ++k)
        if (s.s[i] == s.s[k]) distinct = false;
    if (!distinct) continue;
    const auto base = ranking_from_scores(s);
    const auto perm = testsupport::random_permutation(m, rng);
    ScoreVector shuffled;
    shuffled.s.resize(m);
    for (std::size_t i = 0; i < m; ++i) shuffled.s[perm[i]] = s.s[i];
    const auto moved = ranking_from_scores(shuffled);
    for (std::size_t i = 0; i < m; ++i)
      REQUIRE(moved.position[perm[i]] == base.position[i]);
  }
}

TEST_CASE("ranking_from_order rejects non-permutations") {
  CHECK_THROWS_AS(ranking_from_order({0, 0, 1}), Error);
  CHECK_THROWS_AS(ranking_from_order({0, 3, 1}), Error);
}

TEST_CASE("weight vectors must lie on the simplex") {
  CHECK_NOTHROW(validate_weights({0.5, 0.5}));
  CHECK_THROWS_AS(validate_weights({0.7, 0.7}), Error);
  CHECK_THROWS_AS(validate_weights({1.2, -0.2}), Error);
}

TEST_CASE("correlation matrices are validated") {
  CHECK_NOTHROW(validate_correlation(2, {1.0, 0.3, 0.3, 1.0}));
  CHECK_THROWS_AS(validate_correlation(2, {1.0, 0.3, 0.4, 1.0}), Error);  // asymmetric
  CHECK_THROWS_AS(validate_correlation(2, {1.0, 1.4, 1.4, 1.0}), Error);  // out of range
  CHECK_THROWS_AS(validate_correlation(2, {0.9, 0.3, 0.3, 1.0}), Error);  // diagonal
}
