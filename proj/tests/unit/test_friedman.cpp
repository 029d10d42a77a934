#include <doctest.h>

#include <cmath>

#include "morallex/friedman.hpp"
#include "morallex/util/rng.hpp"
#include "oracles.hpp"

using namespace morallex;

TEST_CASE("ranking a block: best score gets rank one") {
  const auto ranks = rank_block({0.2, 0.9, 0.5});
  CHECK(ranks == std::vector<double>{3.0, 1.0, 2.0});
}

TEST_CASE("tied scores receive the mean of their rank positions") {
  const auto ranks = rank_block({3.0, 2.0, 2.0, 1.0});
  CHECK(ranks == std::vector<double>{1.0, 2.5, 2.5, 4.0});
}

TEST_CASE("per-block ranks always sum to k(k+1)/2") {
  Rng rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t k = 2 + rng.below(6);
    std::vector<double> scores(k);
    for (auto& s : scores) s = std::round(rng.real01() * 4.0) / 4.0;
    const auto ranks = rank_block(scores);
    double sum = 0.0;
    for (double r : ranks) sum += r;
    CHECK(sum == doctest::Approx(static_cast<double>(k * (k + 1)) / 2.0)
                     .epsilon(1e-12));
  }
}

TEST_CASE("a method strictly best in every block has average rank one") {
  const std::vector<std::vector<double>> scores = {
      {0.9, 0.8, 0.95, 0.7},   // dominator
      {0.5, 0.6, 0.40, 0.5},
      {0.1, 0.3, 0.20, 0.6}};
  const auto result = friedman_rank(scores, 0.05);
  CHECK(result.average_ranks[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(result.average_ranks[1] > 1.0);
}

TEST_CASE("average ranks stay within [1, k]") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t k = 2 + rng.below(4);
    const std::size_t n = 2 + rng.below(4);
    std::vector<std::vector<double>> scores(k, std::vector<double>(n));
    for (auto& row : scores) {
      for (auto& v : row) v = rng.real01();
    }
    const auto result = friedman_rank(scores, 0.05);
    double total = 0.0;
    for (double r : result.average_ranks) {
      CHECK(r >= 1.0);
      CHECK(r <= static_cast<double>(k));
      total += r;
    }
    CHECK(total == doctest::Approx(static_cast<double>(k * (k + 1)) / 2.0)
                       .epsilon(1e-9));
  }
}

TEST_CASE("exact p-values match the exhaustive permutation oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t k = 2 + rng.below(3);  // up to 4 methods
    const std::size_t n = 2 + rng.below(3);  // up to 4 blocks
    std::vector<std::vector<double>> scores(k, std::vector<double>(n));
    for (auto& row : scores) {
      // Coarse grid so ties actually happen.
      for (auto& v : row) v = std::round(rng.real01() * 3.0) / 3.0;
    }
    const auto result = friedman_rank(scores, 0.05);
    REQUIRE(result.p_method == "exact");
    const double oracle_p = oracles::friedman_exact_p(scores);
    CHECK(std::fabs(result.p_value - oracle_p) <= 0.01);
  }
}

TEST_CASE("hand-built 3x4 table matches the permutation oracle") {
  const std::vector<std::vector<double>> scores = {
      {0.9, 0.7, 0.8, 0.9},
      {0.5, 0.7, 0.6, 0.3},
      {0.2, 0.1, 0.6, 0.2}};
  const auto result = friedman_rank(scores, 0.05);
  const double oracle_p = oracles::friedman_exact_p(scores);
  CHECK(result.p_method == "exact");
  CHECK(std::fabs(result.p_value - oracle_p) <= 0.01);
  CHECK(result.statistic ==
        doctest::Approx(oracles::friedman_statistic([&] {
          std::vector<std::vector<double>> blocks;
          for (std::size_t b = 0; b < 4; ++b) {
            std::vector<double> column;
            for (std::size_t m = 0; m < 3; ++m) column.push_back(scores[m][b]);
            blocks.push_back(oracles::rank_desc(column));
          }
          return blocks;
        }()))
            .epsilon(1e-12));
}

TEST_CASE("large tables fall back to the chi-square approximation") {
  Rng rng(11);
  const std::size_t k = 12, n = 6;
  std::vector<std::vector<double>> scores(k, std::vector<double>(n));
  for (auto& row : scores) {
    for (auto& v : row) v = rng.real01();
  }
  const auto result = friedman_rank(scores, 0.05);
  CHECK(result.p_method == "chi_squared");
  CHECK(result.p_value >= 0.0);
  CHECK(result.p_value <= 1.0);
}

TEST_CASE("chi-square tail matches a frozen reference value") {
  // 12 methods ranked identically across 6 blocks: statistic n(k-1) = 66,
  // df 11. Survival value from the regularized upper incomplete gamma.
  std::vector<std::vector<double>> scores(12, std::vector<double>(6));
  for (std::size_t m = 0; m < 12; ++m) {
    for (std::size_t b = 0; b < 6; ++b) {
      scores[m][b] = static_cast<double>(12 - m);
    }
  }
  const auto result = friedman_rank(scores, 0.05);
  CHECK(result.p_method == "chi_squared");
  CHECK(result.statistic == doctest::Approx(66.0).epsilon(1e-9));
  CHECK(result.p_value == doctest::Approx(6.9852223075727e-10).epsilon(1e-3));
}

TEST_CASE("the all-tied table keeps the null hypothesis") {
  const std::vector<std::vector<double>> scores = {
      {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}};
  const auto result = friedman_rank(scores, 0.05);
  CHECK(result.statistic == 0.0);
  CHECK(result.p_value == 1.0);
  CHECK_FALSE(result.reject_null);
}

TEST_CASE("degenerate tables are rejected") {
  CHECK_THROWS_AS(friedman_rank({{0.5, 0.6}}, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(friedman_rank({{0.5}, {0.6}}, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(friedman_rank({{0.5, 0.1}, {0.5}}, 0.05),
                  std::invalid_argument);
}

TEST_CASE("reject_null reflects the alpha threshold") {
  // One method dominates everywhere; with enough blocks the exact p-value
  // drops below 0.05.
  std::vector<std::vector<double>> scores(3, std::vector<double>(8));
  for (std::size_t b = 0; b < 8; ++b) {
    scores[0][b] = 0.9;
    scores[1][b] = 0.5;
    scores[2][b] = 0.1;
  }
  const auto result = friedman_rank(scores, 0.05);
  CHECK(result.reject_null);
  const auto lax = friedman_rank(scores, 1e-9);
  CHECK_FALSE(lax.reject_null);
}
