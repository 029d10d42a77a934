#ifndef MORALLEX_CORPUS_HPP
#define MORALLEX_CORPUS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace morallex {

// Annotation schemes carried by the datasets. Label strings are matched
// exactly; mixing schemes in one operation is a contract violation.
enum class LabelScheme { Ternary, BinaryMoral, BinarySide };

std::string scheme_name(LabelScheme scheme);
LabelScheme parse_scheme(const std::string& name);
const std::vector<std::string>& scheme_labels(LabelScheme scheme);
bool is_legal_label(LabelScheme scheme, const std::string& value);

struct LabelValue {
  LabelScheme scheme{LabelScheme::Ternary};
  std::string value;
};

// Throws std::logic_error when the schemes differ.
bool same_label(const LabelValue& a, const LabelValue& b);

struct Document {
  std::string id;
  std::string raw_text;
  std::vector<std::string> tokens;  // empty until preprocess() runs
  LabelValue label;
};

struct SplitAssignment {
  enum class Kind { TrainTest, Folds };
  Kind kind = Kind::TrainTest;
  int num_folds = 0;                       // Folds only
  std::map<std::string, int> assignment;   // TrainTest: 0=train, 1=test
};

struct LabeledDataset {
  std::string name;
  LabelScheme scheme{LabelScheme::Ternary};
  std::vector<Document> documents;
  std::optional<SplitAssignment> split;

  std::vector<const Document*> train_documents() const;
  std::vector<const Document*> test_documents() const;
  // Folds: the documents inside fold `index`, or everything else.
  std::vector<const Document*> fold_documents(int index, bool in_fold) const;
  std::map<std::string, std::size_t> label_counts() const;
};

// --- I/O ------------------------------------------------------------------

// One JSON object per line: {"id": str, "text": str, "label": str}. A
// "tokens" array, when present, restores a preprocessed dataset.
LabeledDataset load_jsonl(const std::string& path, LabelScheme scheme,
                          const std::string& name = "");
void save_jsonl(const LabeledDataset& dataset, const std::string& path);

void save_split_manifest(const SplitAssignment& split, const std::string& path);
SplitAssignment load_split_manifest(const std::string& path);

// --- Stopwords --------------------------------------------------------------

// Bundled English list (see core/data/stopwords_en.txt for the same words).
const std::unordered_set<std::string>& english_stopwords();
std::unordered_set<std::string> load_stopwords(const std::string& path);

// --- Transformations --------------------------------------------------------

// lowercase -> split on non-alphabetic -> drop stopwords -> drop len < 3.
// Token order and duplicates are preserved; documents that end up empty are
// kept and counted in a warning.
LabeledDataset preprocess(const LabeledDataset& dataset,
                          const std::unordered_set<std::string>& stopwords);

// Documents whose token list is empty are removed (explicit filter step).
LabeledDataset drop_empty(const LabeledDataset& dataset);

// Ternary only: Liberty and Oppression collapse to Moral.
LabeledDataset binarize(const LabeledDataset& dataset);

// Exactly two label values present; the majority class is undersampled to
// the minority count, uniformly at random, deterministically per seed.
LabeledDataset balance(const LabeledDataset& dataset, std::uint64_t seed);

// Stratified train/test partition; round(test_fraction * n) per class goes
// to the test side. Classes too small to land on both sides stay in train.
LabeledDataset split(const LabeledDataset& dataset, double test_fraction,
                     std::uint64_t seed);

// Stratified k folds, sizes differing by at most one globally and per class.
SplitAssignment kfold(const LabeledDataset& dataset, int k, std::uint64_t seed);

}  // namespace morallex

#endif
