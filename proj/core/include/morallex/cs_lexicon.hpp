#ifndef MORALLEX_CS_LEXICON_HPP
#define MORALLEX_CS_LEXICON_HPP

#include <string>
#include <utility>
#include <vector>

#include "morallex/corpus.hpp"
#include "morallex/lexicon.hpp"

namespace morallex {

// Sparse word-by-document matrix; each column holds a document's in-vocab
// token counts divided by its in-vocab token total, so nonempty columns
// sum to one over the vocabulary.
struct WordDocMatrix {
  std::vector<std::string> vocab;    // rows, lexicographic
  std::vector<std::string> doc_ids;  // columns, dataset order
  std::vector<std::vector<std::pair<int, double>>> columns;  // (row, value)
};

// One-hot document labels; row order matches WordDocMatrix columns.
struct DocMoralMatrix {
  std::vector<std::string> doc_ids;
  std::vector<std::string> classes;  // scheme label order
  std::vector<int> class_of_doc;     // index into classes, one per doc
};

struct WordMoralMatrix {
  std::vector<std::string> vocab;
  std::vector<std::string> classes;
  std::vector<double> values;  // row-major vocab x classes

  double at(std::size_t row, std::size_t col) const {
    return values[row * classes.size() + col];
  }
};

// Vocabulary = tokens with corpus frequency >= min_frequency; documents
// with no surviving tokens are excluded from both matrices.
std::pair<WordDocMatrix, DocMoralMatrix> build_matrices(
    const LabeledDataset& dataset, long long min_frequency);

// Raw product of the two matrices, before normalization.
WordMoralMatrix compose(const WordDocMatrix& wd, const DocMoralMatrix& dm);

// Column-normalize (classes comparable across unequal prevalence), then
// rescale each row to sum to one.
WordMoralMatrix normalize(const WordMoralMatrix& raw);

// score(w) = row[liberty_class] - row[oppression_class]; the full row is
// kept as per-class auxiliary scores.
Lexicon to_lexicon(const WordMoralMatrix& wm, const std::string& liberty_class,
                   const std::string& oppression_class);

// Sparse triplet dump ("row_id col_id value" per line) for debugging.
void export_word_doc_triplets(const WordDocMatrix& wd, const std::string& path);
void export_word_moral_triplets(const WordMoralMatrix& wm,
                                const std::string& path);

}  // namespace morallex

#endif
