#include "morallex/we_lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "morallex/util/digest.hpp"
#include "morallex/util/log.hpp"
#include "morallex/util/text.hpp"

namespace morallex {

namespace {

// Unit-normalized copy of selected rows, in doubles.
std::vector<double> normalized_row(const EmbeddingMatrix& matrix, int index) {
  const auto row = matrix.row(index);
  double norm_sq = 0.0;
  for (float v : row) norm_sq += static_cast<double>(v) * v;
  if (norm_sq == 0.0) {
    throw std::domain_error("we_lexicon: zero-norm embedding row for '" +
                            matrix.vocabulary()[static_cast<std::size_t>(index)] +
                            "'");
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  std::vector<double> out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) out[i] = row[i] * inv;
  return out;
}

std::vector<int> resolve_seeds(const EmbeddingMatrix& matrix,
                               const std::vector<std::string>& tokens,
                               const char* side) {
  std::vector<int> indices;
  std::vector<std::string> missing;
  for (const auto& token : tokens) {
    const int idx = matrix.find(token);
    if (idx >= 0) {
      indices.push_back(idx);
    } else {
      missing.push_back(token);
    }
  }
  if (!missing.empty()) {
    log::warn("we_lexicon: dropping " + std::to_string(missing.size()) + " " +
              side + " seed(s) missing from the embedding vocabulary (first: " +
              missing.front() + ")");
  }
  if (indices.empty()) {
    throw std::runtime_error(std::string("we_lexicon: no ") + side +
                             " seed present in the embedding vocabulary");
  }
  return indices;
}

}  // namespace

Lexicon generate_we(const EmbeddingMatrix& matrix, const SeedSets& seeds,
                    const WeLexiconOptions& options) {
  if (options.min_frequency && options.frequencies == nullptr) {
    throw std::invalid_argument(
        "we_lexicon: min_frequency filter requires a frequency table");
  }
  const auto liberty_idx = resolve_seeds(matrix, seeds.liberty, "liberty");
  const auto oppression_idx =
      resolve_seeds(matrix, seeds.oppression, "oppression");

  std::vector<std::vector<double>> liberty_vecs, oppression_vecs;
  liberty_vecs.reserve(liberty_idx.size());
  for (int i : liberty_idx) liberty_vecs.push_back(normalized_row(matrix, i));
  oppression_vecs.reserve(oppression_idx.size());
  for (int i : oppression_idx) {
    oppression_vecs.push_back(normalized_row(matrix, i));
  }

  // Scored tokens sorted lexicographically for a reproducible entry order.
  std::vector<int> scored;
  scored.reserve(matrix.size());
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (options.min_frequency &&
        options.frequencies->count(matrix.vocabulary()[i]) <
            *options.min_frequency) {
      continue;
    }
    scored.push_back(static_cast<int>(i));
  }
  std::sort(scored.begin(), scored.end(), [&](int a, int b) {
    return matrix.vocabulary()[static_cast<std::size_t>(a)] <
           matrix.vocabulary()[static_cast<std::size_t>(b)];
  });

  const double lib_scale =
      options.mean_normalize ? 1.0 / static_cast<double>(liberty_vecs.size()) : 1.0;
  const double opp_scale = options.mean_normalize
                               ? 1.0 / static_cast<double>(oppression_vecs.size())
                               : 1.0;

  Lexicon lexicon;
  for (int idx : scored) {
    const auto w = normalized_row(matrix, idx);
    double lib_sum = 0.0;
    for (const auto& s : liberty_vecs) {
      double dot = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) dot += w[i] * s[i];
      lib_sum += dot;
    }
    double opp_sum = 0.0;
    for (const auto& s : oppression_vecs) {
      double dot = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) dot += w[i] * s[i];
      opp_sum += dot;
    }
    lexicon.add(matrix.vocabulary()[static_cast<std::size_t>(idx)],
                lib_scale * lib_sum - opp_scale * opp_sum);
  }

  auto& meta = lexicon.metadata();
  meta["method"] = "WE";
  meta["seeds_digest"] = short_digest(seeds_to_json(seeds));
  meta["liberty_seeds"] = std::to_string(liberty_vecs.size());
  meta["oppression_seeds"] = std::to_string(oppression_vecs.size());
  meta["mean_normalize"] = options.mean_normalize ? "true" : "false";
  meta["min_frequency"] =
      options.min_frequency ? std::to_string(*options.min_frequency) : "none";
  const auto& cfg = matrix.train_config();
  if (auto it = cfg.find("seed"); it != cfg.end()) {
    meta["creation_seed"] = it->second;
  }
  if (auto it = cfg.find("dim"); it != cfg.end()) {
    meta["embedding_dim"] = it->second;
  }
  return lexicon;
}

}  // namespace morallex
