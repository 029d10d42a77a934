// Brute-force reference implementations used by tests. Every routine here
// recomputes its result from first principles, independent of the library
// code paths it checks.
#ifndef MORALLEX_TESTS_ORACLES_HPP
#define MORALLEX_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "morallex/corpus.hpp"
#include "morallex/embedding.hpp"
#include "morallex/seeds.hpp"

namespace oracles {

inline double cosine(std::span<const float> a, std::span<const float> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Eq-style polarity by a plain double loop over (word, seed) pairs.
inline std::map<std::string, double> we_scores(
    const morallex::EmbeddingMatrix& matrix, const morallex::SeedSets& seeds) {
  std::map<std::string, double> scores;
  for (const auto& token : matrix.vocabulary()) {
    const auto w = matrix.row(matrix.find(token));
    double score = 0.0;
    for (const auto& s : seeds.liberty) {
      score += cosine(w, matrix.row(matrix.find(s)));
    }
    for (const auto& s : seeds.oppression) {
      score -= cosine(w, matrix.row(matrix.find(s)));
    }
    scores[token] = score;
  }
  return scores;
}

// Per-word label-mass accumulation straight from the documents: for every
// (document, token) pair, add count/in-vocab-length to the label's cell.
inline std::map<std::string, std::map<std::string, double>> label_mass(
    const morallex::LabeledDataset& dataset, long long min_frequency) {
  std::map<std::string, long long> freq;
  for (const auto& doc : dataset.documents) {
    for (const auto& token : doc.tokens) ++freq[token];
  }
  std::map<std::string, std::map<std::string, double>> mass;
  for (const auto& doc : dataset.documents) {
    std::map<std::string, long long> counts;
    long long len = 0;
    for (const auto& token : doc.tokens) {
      if (freq[token] >= min_frequency) {
        ++counts[token];
        ++len;
      }
    }
    if (len == 0) continue;
    for (const auto& [token, count] : counts) {
      mass[token][doc.label.value] +=
          static_cast<double>(count) / static_cast<double>(len);
    }
  }
  return mass;
}

// Exact singular values through the Gram-matrix eigendecomposition; a
// different route than both library paths (divide-and-conquer SVD and the
// randomized sketch).
inline Eigen::VectorXd exact_singular_values(const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd gram = x.cols() <= x.rows()
                                   ? Eigen::MatrixXd(x.transpose() * x)
                                   : Eigen::MatrixXd(x * x.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  Eigen::VectorXd values = eig.eigenvalues();  // ascending
  Eigen::VectorXd singular(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    singular(i) = std::sqrt(std::max(0.0, values(values.size() - 1 - i)));
  }
  return singular;  // descending
}

// Central finite differences of a scalar function of (w, b).
template <typename Loss>
inline void finite_diff_gradient(const Loss& loss, const Eigen::VectorXd& w,
                                 double b, double step, Eigen::VectorXd* grad_w,
                                 double* grad_b) {
  grad_w->resize(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    Eigen::VectorXd hi = w, lo = w;
    hi(i) += step;
    lo(i) -= step;
    (*grad_w)(i) = (loss(hi, b) - loss(lo, b)) / (2.0 * step);
  }
  *grad_b = (loss(w, b + step) - loss(w, b - step)) / (2.0 * step);
}

// --- Friedman ------------------------------------------------------------

// Tie-averaged ranks of one block, rank 1 = largest score. Counting form:
// rank(i) = #greater + (#equal + 1) / 2, with i itself in the equal count.
inline std::vector<double> rank_desc(const std::vector<double>& scores) {
  const std::size_t k = scores.size();
  std::vector<double> ranks(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    double greater = 0.0, equal = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (scores[j] > scores[i]) greater += 1.0;
      else if (scores[j] == scores[i]) equal += 1.0;
    }
    ranks[i] = greater + (equal + 1.0) / 2.0;
  }
  return ranks;
}

inline double friedman_statistic(const std::vector<std::vector<double>>& ranks) {
  const double n = static_cast<double>(ranks.size());
  const double k = static_cast<double>(ranks[0].size());
  std::vector<double> sums(ranks[0].size(), 0.0);
  double a = 0.0;
  for (const auto& block : ranks) {
    for (std::size_t m = 0; m < block.size(); ++m) {
      sums[m] += block[m];
      a += block[m] * block[m];
    }
  }
  const double c = n * k * (k + 1.0) * (k + 1.0) / 4.0;
  if (a - c <= 0.0) return 0.0;
  double ss = 0.0;
  for (double r : sums) ss += (r - n * (k + 1.0) / 2.0) * (r - n * (k + 1.0) / 2.0);
  return (k - 1.0) * ss / (a - c);
}

// Exhaustive permutation p-value: every block's rank multiset permuted in
// all distinct ways (an odometer over blocks), statistic recomputed from
// scratch each time.
inline double friedman_exact_p(const std::vector<std::vector<double>>& scores) {
  const std::size_t k = scores.size();
  const std::size_t n = scores[0].size();
  std::vector<std::vector<double>> observed_ranks(n);
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<double> column(k);
    for (std::size_t m = 0; m < k; ++m) column[m] = scores[m][b];
    observed_ranks[b] = rank_desc(column);
  }
  const double observed = friedman_statistic(observed_ranks);

  std::vector<std::vector<std::vector<double>>> perms(n);
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<double> sorted = observed_ranks[b];
    std::sort(sorted.begin(), sorted.end());
    do {
      perms[b].push_back(sorted);
    } while (std::next_permutation(sorted.begin(), sorted.end()));
  }

  std::vector<std::size_t> idx(n, 0);
  long long total = 0, at_least = 0;
  std::vector<std::vector<double>> assembled(n);
  while (true) {
    for (std::size_t b = 0; b < n; ++b) assembled[b] = perms[b][idx[b]];
    ++total;
    if (friedman_statistic(assembled) >= observed - 1e-9) ++at_least;
    std::size_t pos = 0;
    while (pos < n) {
      if (++idx[pos] < perms[pos].size()) break;
      idx[pos] = 0;
      ++pos;
    }
    if (pos == n) break;
  }
  return static_cast<double>(at_least) / static_cast<double>(total);
}

}  // namespace oracles

#endif
