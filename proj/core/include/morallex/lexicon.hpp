#ifndef MORALLEX_LEXICON_HPP
#define MORALLEX_LEXICON_HPP

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace morallex {

enum class RescaleMode { None, MinmaxSymmetric, Zscore };

std::string rescale_mode_name(RescaleMode mode);
RescaleMode parse_rescale_mode(const std::string& name);

// Token -> scalar polarity score (positive = liberty-leaning), with
// optional per-class auxiliary scores and provenance metadata. Entry order
// is preserved; it defines the feature-vector index order downstream.
class Lexicon {
 public:
  struct Entry {
    std::string token;
    double score = 0.0;
    std::vector<std::pair<std::string, double>> aux;  // class -> score
  };

  Lexicon() = default;

  // Throws on duplicate tokens and non-finite scores.
  void add(const std::string& token, double score,
           std::vector<std::pair<std::string, double>> aux = {});

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }
  bool contains(const std::string& token) const;
  std::optional<double> score(const std::string& token) const;
  const Entry* find(const std::string& token) const;

  std::map<std::string, std::string>& metadata() {
    digest_cache_.clear();
    return metadata_;
  }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }
  std::string method() const;

  // Canonical TSV serialization; also the digest input.
  std::string to_tsv() const;
  // Cached lazily; call once before sharing the lexicon across threads
  // (mutation through add() or metadata() invalidates the cache).
  const std::string& digest() const;
  std::string short_id() const { return digest().substr(0, 12); }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<std::string, std::string> metadata_;
  mutable std::string digest_cache_;
};

void save_lexicon(const Lexicon& lexicon, const std::string& path);
Lexicon load_lexicon(const std::string& path);

// minmax_symmetric: affine map sending [min, max] to [-1, +1].
// zscore: mean 0, population standard deviation 1.
Lexicon rescale(const Lexicon& lexicon, RescaleMode mode);

// Merge N >= 2 lexicons: a token is kept iff it appears in at least
// ceil(p/100 * N) of them; its score is the mean of the available
// (optionally rescaled) constituent scores.
Lexicon overlap_merge(const std::vector<Lexicon>& lexicons,
                      double selection_percent,
                      RescaleMode constituent_rescale = RescaleMode::None);

struct LexiconComparison {
  double distance = 0.0;  // mean absolute score difference, shared vocab
  // (token, signed difference a-b after rescaling), largest magnitude first
  std::vector<std::pair<std::string, double>> most_distant;
  // Plain mean-absolute-difference heuristic, not the exact metric from the
  // cross-domain comparison literature; consumers must not report it as such.
  static constexpr const char* kMethodLabel =
      "mean-absolute-difference (approximate lexicon distance)";
};

LexiconComparison compare(const Lexicon& a, const Lexicon& b);

}  // namespace morallex

#endif
