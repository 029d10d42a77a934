#include "morallex/featurize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "morallex/util/digest.hpp"
#include "morallex/util/log.hpp"
#include "morallex/util/rng.hpp"
#include "morallex/util/text.hpp"

namespace morallex {

namespace {

std::string ids_digest(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  return sha256_hex(join(ids, "\n"));
}

}  // namespace

std::string split_digest(std::span<const Document* const> documents) {
  std::vector<std::string> ids;
  ids.reserve(documents.size());
  for (const Document* doc : documents) ids.push_back(doc->id);
  return ids_digest(std::move(ids));
}

std::string split_digest(const std::vector<Document>& documents) {
  std::vector<std::string> ids;
  ids.reserve(documents.size());
  for (const auto& doc : documents) ids.push_back(doc.id);
  return ids_digest(std::move(ids));
}

FeatureVector doc_vector(const Lexicon& lexicon, const Document& document) {
  std::unordered_set<std::string> present(document.tokens.begin(),
                                          document.tokens.end());
  FeatureVector out;
  out.schema_id = "docvec:" + lexicon.short_id();
  out.values.resize(lexicon.size(), 0.0);
  const auto& entries = lexicon.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (present.count(entries[i].token)) out.values[i] = entries[i].score;
  }
  return out;
}

FeatureVector stat_summary(const Lexicon& lexicon, const Document& document) {
  std::vector<double> matched;
  for (const auto& token : document.tokens) {
    if (auto s = lexicon.score(token)) matched.push_back(*s);
  }
  FeatureVector out;
  out.schema_id = "stats:" + lexicon.short_id();
  out.values.assign(5, 0.0);
  if (matched.empty()) return out;

  std::sort(matched.begin(), matched.end());
  const std::size_t n = matched.size();
  double sum = 0.0;
  for (double v : matched) sum += v;
  const double mean = sum / static_cast<double>(n);
  double var = 0.0;
  for (double v : matched) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  const double median = n % 2 == 1
                            ? matched[n / 2]
                            : 0.5 * (matched[n / 2 - 1] + matched[n / 2]);
  out.values[0] = mean;
  out.values[1] = matched.back();
  out.values[2] = median;
  out.values[3] = var;
  out.values[4] = matched.back() - matched.front();
  return out;
}

FeatureVector extended_vector(const Lexicon& lexicon, const Document& document) {
  FeatureVector out = doc_vector(lexicon, document);
  const FeatureVector stats = stat_summary(lexicon, document);
  out.values.insert(out.values.end(), stats.values.begin(), stats.values.end());
  out.schema_id = "docvec+stats:" + lexicon.short_id();
  return out;
}

UnigramFeaturizer UnigramFeaturizer::fit(
    int vocabulary_size, std::span<const Document* const> train_docs) {
  if (vocabulary_size < 1) {
    throw std::invalid_argument("featurize: unigram vocabulary size must be >= 1");
  }
  std::unordered_map<std::string, long long> counts;
  for (const Document* doc : train_docs) {
    for (const auto& token : doc->tokens) ++counts[token];
  }
  std::vector<std::pair<std::string, long long>> ranked(counts.begin(),
                                                        counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<std::size_t>(vocabulary_size) > ranked.size()) {
    log::warn("featurize: requested unigram vocabulary of " +
              std::to_string(vocabulary_size) + " but only " +
              std::to_string(ranked.size()) + " distinct tokens exist");
  }

  UnigramFeaturizer featurizer;
  const std::size_t n =
      std::min<std::size_t>(static_cast<std::size_t>(vocabulary_size), ranked.size());
  featurizer.vocabulary_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    featurizer.index_.emplace(ranked[i].first, static_cast<int>(i));
    featurizer.vocabulary_.push_back(ranked[i].first);
  }
  featurizer.fit_digest_ = split_digest(train_docs);
  featurizer.schema_id_ =
      "unigram:" + std::to_string(vocabulary_size) + ":" +
      short_digest(join(featurizer.vocabulary_, "\n"));
  return featurizer;
}

FeatureVector UnigramFeaturizer::apply(const Document& document) const {
  FeatureVector out;
  out.schema_id = schema_id_;
  out.values.assign(vocabulary_.size(), 0.0);
  for (const auto& token : document.tokens) {
    auto it = index_.find(token);
    if (it != index_.end()) out.values[static_cast<std::size_t>(it->second)] = 1.0;
  }
  return out;
}

namespace {

// Thin Q factor of a matrix with more rows than columns.
Eigen::MatrixXd thin_q(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

}  // namespace

TruncatedSvdResult truncated_svd(const Eigen::MatrixXd& matrix, int k,
                                 std::uint64_t seed, int oversampling,
                                 int power_iterations, bool force_randomized) {
  const Eigen::Index n = matrix.rows();
  const Eigen::Index d = matrix.cols();
  if (n < 1 || d < 1) {
    throw std::invalid_argument("featurize: SVD needs a nonempty matrix");
  }
  if (k < 1) throw std::invalid_argument("featurize: SVD k must be >= 1");
  const Eigen::Index small_side = std::min(n, d);
  if (k > small_side) {
    log::warn("featurize: k=" + std::to_string(k) +
              " exceeds min(n,d)=" + std::to_string(small_side) + "; clamped");
    k = static_cast<int>(small_side);
  }

  const Eigen::Index sketch = std::min<Eigen::Index>(
      static_cast<Eigen::Index>(k) + oversampling, small_side);
  TruncatedSvdResult result;

  Eigen::VectorXd all_singular;
  Eigen::MatrixXd all_v;
  if (!force_randomized && small_side <= 2 * sketch) {
    // Small problem: the sketch would cover most of the spectrum anyway.
    Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    all_singular = svd.singularValues();
    all_v = svd.matrixV();
    result.randomized = false;
  } else {
    Rng rng(seed);
    Eigen::MatrixXd omega(d, sketch);
    for (Eigen::Index j = 0; j < sketch; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) omega(i, j) = rng.gaussian();
    }
    Eigen::MatrixXd q = thin_q(matrix * omega);
    for (int it = 0; it < power_iterations; ++it) {
      const Eigen::MatrixXd z = thin_q(matrix.transpose() * q);
      q = thin_q(matrix * z);
    }
    const Eigen::MatrixXd b = q.transpose() * matrix;  // sketch x d
    Eigen::BDCSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinV);
    all_singular = svd.singularValues();
    all_v = svd.matrixV();
    result.randomized = true;
  }

  // Clamp k to the attainable rank (relative tolerance on the spectrum).
  const double sigma0 = all_singular.size() > 0 ? all_singular(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < all_singular.size(); ++i) {
    if (all_singular(i) > sigma0 * 1e-12 && all_singular(i) > 0.0) ++rank;
  }
  if (rank < 1) rank = 1;  // degenerate zero matrix keeps one direction
  if (k > rank) {
    log::warn("featurize: k=" + std::to_string(k) + " exceeds attainable rank " +
              std::to_string(rank) + "; clamped");
    k = rank;
  }
  result.singular_values = all_singular.head(k);
  result.right_vectors = all_v.leftCols(k);
  return result;
}

SvdReducer SvdReducer::fit(const Eigen::MatrixXd& features, int k,
                           std::uint64_t seed, const std::string& input_schema,
                           const std::string& fit_digest) {
  if (!features.allFinite()) {
    throw std::invalid_argument("featurize: SVD input contains non-finite values");
  }
  auto svd = truncated_svd(features, k, seed);
  SvdReducer reducer;
  reducer.basis_ = std::move(svd.right_vectors);
  reducer.singular_values_ = std::move(svd.singular_values);
  reducer.train_frobenius_sq_ = features.squaredNorm();
  reducer.used_randomized_ = svd.randomized;
  reducer.input_schema_ = input_schema;
  reducer.fit_digest_ = fit_digest;
  reducer.schema_id_ =
      "svd:k" + std::to_string(reducer.k()) + ":" +
      short_digest(input_schema + "|" + fit_digest + "|" +
                   std::to_string(reducer.k()) + "|" + std::to_string(seed));
  return reducer;
}

FeatureVector SvdReducer::reduce(const FeatureVector& vector) const {
  if (vector.schema_id != input_schema_) {
    throw std::invalid_argument("featurize: reducer expects schema '" +
                                input_schema_ + "', got '" + vector.schema_id +
                                "'");
  }
  if (static_cast<Eigen::Index>(vector.values.size()) != basis_.rows()) {
    throw std::invalid_argument("featurize: reducer dimension mismatch");
  }
  Eigen::Map<const Eigen::VectorXd> x(vector.values.data(),
                                      static_cast<Eigen::Index>(vector.values.size()));
  const Eigen::VectorXd projected = basis_.transpose() * x;
  FeatureVector out;
  out.schema_id = schema_id_;
  out.values.assign(projected.data(), projected.data() + projected.size());
  return out;
}

double SvdReducer::energy_fraction() const {
  if (train_frobenius_sq_ <= 0.0) return 0.0;
  return singular_values_.squaredNorm() / train_frobenius_sq_;
}

FeatureVector combined_features(const std::vector<const Lexicon*>& lexicons,
                                const std::vector<const SvdReducer*>& reducers,
                                const Document& document) {
  if (lexicons.size() != reducers.size() || lexicons.empty()) {
    throw std::invalid_argument(
        "featurize: combined_features needs one fitted reducer per lexicon");
  }
  for (std::size_t i = 1; i < reducers.size(); ++i) {
    if (reducers[i]->fit_digest() != reducers[0]->fit_digest()) {
      throw std::invalid_argument(
          "featurize: reducers were fit on different training splits");
    }
  }
  FeatureVector out;
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < lexicons.size(); ++i) {
    const FeatureVector reduced =
        reducers[i]->reduce(doc_vector(*lexicons[i], document));
    out.values.insert(out.values.end(), reduced.values.begin(),
                      reduced.values.end());
    parts.push_back(reduced.schema_id);
  }
  out.schema_id = "combined:" + join(parts, "+");
  return out;
}

Eigen::MatrixXd feature_matrix(const std::vector<FeatureVector>& rows) {
  if (rows.empty()) {
    throw std::invalid_argument("featurize: feature matrix needs rows");
  }
  const std::size_t d = rows[0].values.size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].schema_id != rows[0].schema_id) {
      throw std::invalid_argument(
          "featurize: mixed schema ids in one feature matrix ('" +
          rows[0].schema_id + "' vs '" + rows[i].schema_id + "')");
    }
    if (rows[i].values.size() != d) {
      throw std::invalid_argument("featurize: ragged feature rows");
    }
    for (std::size_t j = 0; j < d; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i].values[j];
    }
  }
  return m;
}

void export_features_csv(const std::vector<std::string>& ids,
                         const std::vector<FeatureVector>& rows,
                         const std::string& path) {
  if (ids.size() != rows.size()) {
    throw std::invalid_argument("featurize: id/row count mismatch");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("featurize: cannot write file: " + path);
  out << "# schema=" << (rows.empty() ? "empty" : rows[0].schema_id) << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << ids[i];
    for (double v : rows[i].values) out << "," << format_double_exact(v);
    out << "\n";
  }
  if (!out) throw std::runtime_error("featurize: write failed: " + path);
}

}  // namespace morallex
