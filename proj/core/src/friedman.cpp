#include "morallex/friedman.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace morallex {

std::vector<double> rank_block(const std::vector<double>& scores) {
  const std::size_t k = scores.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  std::vector<double> ranks(k, 0.0);
  std::size_t i = 0;
  while (i < k) {
    std::size_t j = i;
    while (j + 1 < k && scores[order[j + 1]] == scores[order[i]]) ++j;
    // positions i..j (0-based) share the mean of ranks i+1..j+1
    const double mean_rank = static_cast<double>(i + j + 2) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

// The statistic depends on the per-method rank sums only; A and C are
// invariant under within-block permutation, so they are fixed upfront.
double statistic_from_sums(const std::vector<double>& rank_sums, double n,
                           double k, double a_minus_c) {
  const double mean = n * (k + 1.0) / 2.0;
  double ss = 0.0;
  for (double r : rank_sums) ss += (r - mean) * (r - mean);
  return (k - 1.0) * ss / a_minus_c;
}

// Exact permutation distribution by convolving the per-block rank
// multisets over method rank sums. Ranks are kept as 2x integers so tie
// averages stay exact.
double exact_p_value(const std::vector<std::vector<double>>& block_ranks,
                     double observed, double a_minus_c) {
  const std::size_t n = block_ranks.size();
  const std::size_t k = block_ranks[0].size();

  using Key = std::vector<int>;  // partial rank sums x2, per method
  std::map<Key, unsigned long long> states;
  states[Key(k, 0)] = 1;

  for (const auto& ranks : block_ranks) {
    std::vector<int> twice(k);
    for (std::size_t m = 0; m < k; ++m) {
      twice[m] = static_cast<int>(std::llround(ranks[m] * 2.0));
    }
    std::sort(twice.begin(), twice.end());
    // Distinct permutations of this block's rank multiset.
    std::vector<std::vector<int>> perms;
    do {
      perms.push_back(twice);
    } while (std::next_permutation(twice.begin(), twice.end()));

    std::map<Key, unsigned long long> next;
    for (const auto& [sums, count] : states) {
      for (const auto& perm : perms) {
        Key merged = sums;
        for (std::size_t m = 0; m < k; ++m) merged[m] += perm[m];
        next[merged] += count;
      }
    }
    states.swap(next);
  }

  unsigned long long total = 0;
  unsigned long long at_least = 0;
  std::vector<double> sums(k);
  for (const auto& [key, count] : states) {
    for (std::size_t m = 0; m < k; ++m) sums[m] = key[m] / 2.0;
    const double stat = statistic_from_sums(
        sums, static_cast<double>(n), static_cast<double>(k), a_minus_c);
    total += count;
    if (stat >= observed - 1e-9) at_least += count;
  }
  return static_cast<double>(at_least) / static_cast<double>(total);
}

// Rough size of the exact DP: number of reachable sum vectors.
bool exact_feasible(std::size_t k, std::size_t n) {
  if (k > 5) return false;
  double states = 1.0;
  for (std::size_t m = 0; m + 1 < k; ++m) {
    states *= static_cast<double>(2 * n * (k - 1) + 1);
    if (states > 3e6) return false;
  }
  return true;
}

}  // namespace

FriedmanResult friedman_rank(const std::vector<std::vector<double>>& scores,
                             double alpha) {
  const std::size_t k = scores.size();
  if (k < 2) {
    throw std::invalid_argument("friedman: need at least two methods");
  }
  const std::size_t n = scores[0].size();
  if (n < 2) {
    throw std::invalid_argument("friedman: need at least two blocks");
  }
  for (const auto& row : scores) {
    if (row.size() != n) {
      throw std::invalid_argument("friedman: ragged score table");
    }
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("friedman: non-finite score");
      }
    }
  }

  // Rank within each block (column of the method x block table).
  std::vector<std::vector<double>> block_ranks(n, std::vector<double>(k));
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<double> column(k);
    for (std::size_t m = 0; m < k; ++m) column[m] = scores[m][b];
    block_ranks[b] = rank_block(column);
  }

  FriedmanResult result;
  result.average_ranks.assign(k, 0.0);
  std::vector<double> rank_sums(k, 0.0);
  double a = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t m = 0; m < k; ++m) {
      rank_sums[m] += block_ranks[b][m];
      a += block_ranks[b][m] * block_ranks[b][m];
    }
  }
  for (std::size_t m = 0; m < k; ++m) {
    result.average_ranks[m] = rank_sums[m] / static_cast<double>(n);
  }

  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  const double c = dn * dk * (dk + 1.0) * (dk + 1.0) / 4.0;
  const double a_minus_c = a - c;
  if (a_minus_c <= 0.0) {
    // Every block is one big tie; there is no evidence either way.
    result.statistic = 0.0;
    result.p_value = 1.0;
    result.p_method = "exact";
    result.reject_null = false;
    return result;
  }

  result.statistic = statistic_from_sums(rank_sums, dn, dk, a_minus_c);
  if (exact_feasible(k, n)) {
    result.p_value = exact_p_value(block_ranks, result.statistic, a_minus_c);
    result.p_method = "exact";
  } else {
    boost::math::chi_squared dist(dk - 1.0);
    result.p_value = boost::math::cdf(boost::math::complement(
        dist, result.statistic));
    result.p_method = "chi_squared";
  }
  result.reject_null = result.p_value < alpha;
  return result;
}

}  // namespace morallex
