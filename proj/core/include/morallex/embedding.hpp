#ifndef MORALLEX_EMBEDDING_HPP
#define MORALLEX_EMBEDDING_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace morallex {

struct SkipgramConfig {
  int dim = 300;
  int window = 5;
  int negative_samples = 5;
  int epochs = 5;
  double initial_learning_rate = 0.025;  // linear decay, floor at 1e-4 of it
  int min_count = 5;
  std::uint64_t seed = 1;
  bool subsample = false;  // frequent-word subsampling, off by default
  double subsample_threshold = 1e-3;
  // threads > 1 enables lock-free concurrent updates; results are then
  // nondeterministic. threads == 1 is the deterministic contract.
  int threads = 1;
};

// Token -> dense float32 vector table with cosine queries. Rows are fixed
// at construction; queries are safe from any number of concurrent readers.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix(std::vector<std::string> vocabulary, int dim,
                  std::vector<float> vectors);

  int dim() const { return dim_; }
  std::size_t size() const { return vocabulary_.size(); }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }

  // -1 when absent.
  int find(const std::string& token) const;
  std::span<const float> row(int index) const;

  // Throws std::out_of_range for unknown tokens and std::domain_error for
  // zero-norm rows (numeric failure, distinct by contract).
  double cosine(const std::string& a, const std::string& b) const;

  const std::map<std::string, std::string>& train_config() const {
    return train_config_;
  }
  const std::vector<double>& epoch_losses() const { return epoch_losses_; }

  void set_train_config(std::map<std::string, std::string> config) {
    train_config_ = std::move(config);
  }
  void set_epoch_losses(std::vector<double> losses) {
    epoch_losses_ = std::move(losses);
  }

 private:
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, int> index_;
  int dim_ = 0;
  std::vector<float> vectors_;  // row-major size() x dim()
  std::map<std::string, std::string> train_config_;
  std::vector<double> epoch_losses_;
};

// Skip-gram with negative sampling. Vocabulary is every token with corpus
// frequency >= min_count, ordered by count desc then token asc.
EmbeddingMatrix train_skipgram(
    const std::vector<std::vector<std::string>>& corpus,
    const SkipgramConfig& config);

// Plain-text vector file: first line "<vocab_count> <dim>", then one line
// per token: "token v1 v2 ... vd".
void save_embeddings(const EmbeddingMatrix& matrix, const std::string& path);
EmbeddingMatrix load_embeddings(const std::string& path);

}  // namespace morallex

#endif
