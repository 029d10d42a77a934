#ifndef MORALLEX_FEATURIZE_HPP
#define MORALLEX_FEATURIZE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "morallex/corpus.hpp"
#include "morallex/lexicon.hpp"

namespace morallex {

struct FeatureVector {
  std::vector<double> values;
  std::string schema_id;
};

// Digest of a document collection's id set; the lineage token that ties
// fitted featurizers to the split they were trained on.
std::string split_digest(std::span<const Document* const> documents);
std::string split_digest(const std::vector<Document>& documents);

// Vector indexed by the lexicon's entry order; a position holds the
// token's score when the token occurs in the document (presence-based),
// else zero.
FeatureVector doc_vector(const Lexicon& lexicon, const Document& document);

// [mean, max, median, population variance, max - min] over the multiset of
// matched lexicon scores (duplicates counted); all-zero when nothing matches.
FeatureVector stat_summary(const Lexicon& lexicon, const Document& document);

// doc_vector with the five summary statistics appended.
FeatureVector extended_vector(const Lexicon& lexicon, const Document& document);

// Binary presence indicators over the top-N training tokens by frequency
// (ties lexicographic). Immutable after fit.
class UnigramFeaturizer {
 public:
  static UnigramFeaturizer fit(int vocabulary_size,
                               std::span<const Document* const> train_docs);

  FeatureVector apply(const Document& document) const;
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const std::string& schema_id() const { return schema_id_; }
  const std::string& fit_digest() const { return fit_digest_; }

 private:
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, int> index_;
  std::string schema_id_;
  std::string fit_digest_;
};

// Truncated SVD projection onto the top-k right singular directions.
// Fitting uses an exact decomposition when the problem is small and a
// randomized range finder (Gaussian sketch, oversampling + power
// iterations) otherwise.
class SvdReducer {
 public:
  static constexpr int kOversampling = 10;
  static constexpr int kPowerIterations = 2;

  // `input_schema` is the schema id of the vectors this reducer consumes;
  // `fit_digest` identifies the training split (lineage check input).
  static SvdReducer fit(const Eigen::MatrixXd& features, int k,
                        std::uint64_t seed, const std::string& input_schema,
                        const std::string& fit_digest);

  FeatureVector reduce(const FeatureVector& vector) const;

  int k() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  const Eigen::VectorXd& singular_values() const { return singular_values_; }
  // Frobenius-energy fraction captured on the training matrix:
  // sum(top-k sigma^2) / ||X||_F^2.
  double energy_fraction() const;
  const std::string& input_schema() const { return input_schema_; }
  const std::string& schema_id() const { return schema_id_; }
  const std::string& fit_digest() const { return fit_digest_; }
  bool used_randomized() const { return used_randomized_; }

 private:
  Eigen::MatrixXd basis_;  // d x k
  Eigen::VectorXd singular_values_;
  double train_frobenius_sq_ = 0.0;
  bool used_randomized_ = false;
  std::string input_schema_;
  std::string schema_id_;
  std::string fit_digest_;
};

// The randomized kernel behind SvdReducer, exposed for direct use:
// singular values and right singular vectors of the top-k subspace.
struct TruncatedSvdResult {
  Eigen::VectorXd singular_values;
  Eigen::MatrixXd right_vectors;  // d x k
  bool randomized = false;
};
TruncatedSvdResult truncated_svd(const Eigen::MatrixXd& matrix, int k,
                                 std::uint64_t seed,
                                 int oversampling = SvdReducer::kOversampling,
                                 int power_iterations = SvdReducer::kPowerIterations,
                                 bool force_randomized = false);

// Concatenation, in declared lexicon order, of the per-lexicon reduced doc
// vectors. Every reducer must match its lexicon and share one fit digest.
FeatureVector combined_features(const std::vector<const Lexicon*>& lexicons,
                                const std::vector<const SvdReducer*>& reducers,
                                const Document& document);

// Feature matrix over many documents, one row per document.
Eigen::MatrixXd feature_matrix(const std::vector<FeatureVector>& rows);

// CSV with a "# schema=<id>" comment header; one row per document id.
void export_features_csv(const std::vector<std::string>& ids,
                         const std::vector<FeatureVector>& rows,
                         const std::string& path);

}  // namespace morallex

#endif
