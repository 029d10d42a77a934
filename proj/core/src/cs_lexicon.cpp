#include "morallex/cs_lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "morallex/util/log.hpp"
#include "morallex/util/text.hpp"

namespace morallex {

std::pair<WordDocMatrix, DocMoralMatrix> build_matrices(
    const LabeledDataset& dataset, long long min_frequency) {
  std::unordered_map<std::string, long long> freq;
  for (const auto& doc : dataset.documents) {
    for (const auto& token : doc.tokens) ++freq[token];
  }
  std::vector<std::string> vocab;
  for (const auto& [token, count] : freq) {
    if (count >= min_frequency) vocab.push_back(token);
  }
  if (vocab.empty()) {
    throw std::runtime_error(
        "cs_lexicon: vocabulary empty after frequency cut-off " +
        std::to_string(min_frequency));
  }
  std::sort(vocab.begin(), vocab.end());
  std::unordered_map<std::string, int> vocab_index;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    vocab_index.emplace(vocab[i], static_cast<int>(i));
  }

  WordDocMatrix wd;
  wd.vocab = vocab;
  DocMoralMatrix dm;
  dm.classes = scheme_labels(dataset.scheme);
  std::size_t skipped = 0;
  for (const auto& doc : dataset.documents) {
    std::map<int, long long> counts;  // ordered rows within the column
    long long in_vocab_total = 0;
    for (const auto& token : doc.tokens) {
      auto it = vocab_index.find(token);
      if (it == vocab_index.end()) continue;
      ++counts[it->second];
      ++in_vocab_total;
    }
    if (in_vocab_total == 0) {
      ++skipped;
      continue;
    }
    std::vector<std::pair<int, double>> column;
    column.reserve(counts.size());
    for (const auto& [row, count] : counts) {
      column.emplace_back(row, static_cast<double>(count) /
                                   static_cast<double>(in_vocab_total));
    }
    wd.doc_ids.push_back(doc.id);
    wd.columns.push_back(std::move(column));

    const auto cls = std::find(dm.classes.begin(), dm.classes.end(),
                               doc.label.value);
    dm.doc_ids.push_back(doc.id);
    dm.class_of_doc.push_back(
        static_cast<int>(cls - dm.classes.begin()));
  }
  if (skipped > 0) {
    log::info("cs_lexicon: excluded " + std::to_string(skipped) +
              " document(s) with no in-vocabulary tokens");
  }
  return {std::move(wd), std::move(dm)};
}

WordMoralMatrix compose(const WordDocMatrix& wd, const DocMoralMatrix& dm) {
  if (wd.doc_ids != dm.doc_ids) {
    throw std::invalid_argument(
        "cs_lexicon: word-doc columns and doc-moral rows disagree");
  }
  WordMoralMatrix wm;
  wm.vocab = wd.vocab;
  wm.classes = dm.classes;
  wm.values.assign(wm.vocab.size() * wm.classes.size(), 0.0);
  const std::size_t n_classes = wm.classes.size();
  for (std::size_t d = 0; d < wd.columns.size(); ++d) {
    // One-hot row of the doc-moral matrix; generic product over classes.
    for (const auto& [row, value] : wd.columns[d]) {
      for (std::size_t c = 0; c < n_classes; ++c) {
        const double dm_entry =
            dm.class_of_doc[d] == static_cast<int>(c) ? 1.0 : 0.0;
        wm.values[static_cast<std::size_t>(row) * n_classes + c] +=
            value * dm_entry;
      }
    }
  }
  return wm;
}

WordMoralMatrix normalize(const WordMoralMatrix& raw) {
  const std::size_t n_classes = raw.classes.size();
  const std::size_t n_words = raw.vocab.size();

  std::vector<double> col_sums(n_classes, 0.0);
  for (std::size_t r = 0; r < n_words; ++r) {
    for (std::size_t c = 0; c < n_classes; ++c) {
      const double v = raw.values[r * n_classes + c];
      if (v < 0.0) {
        throw std::invalid_argument(
            "cs_lexicon: normalize requires nonnegative entries");
      }
      col_sums[c] += v;
    }
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (col_sums[c] <= 0.0) {
      throw std::runtime_error("cs_lexicon: class '" + raw.classes[c] +
                               "' has no surviving words (zero column)");
    }
  }

  WordMoralMatrix out;
  out.classes = raw.classes;
  std::size_t dropped = 0;
  for (std::size_t r = 0; r < n_words; ++r) {
    std::vector<double> row(n_classes);
    double row_sum = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
      row[c] = raw.values[r * n_classes + c] / col_sums[c];
      row_sum += row[c];
    }
    if (row_sum <= 0.0) {
      ++dropped;
      continue;
    }
    out.vocab.push_back(raw.vocab[r]);
    for (std::size_t c = 0; c < n_classes; ++c) {
      out.values.push_back(row[c] / row_sum);
    }
  }
  if (dropped > 0) {
    log::warn("cs_lexicon: dropped " + std::to_string(dropped) +
              " all-zero row(s) during normalization");
  }
  return out;
}

Lexicon to_lexicon(const WordMoralMatrix& wm, const std::string& liberty_class,
                   const std::string& oppression_class) {
  const auto find_class = [&](const std::string& name) {
    const auto it = std::find(wm.classes.begin(), wm.classes.end(), name);
    if (it == wm.classes.end()) {
      throw std::invalid_argument("cs_lexicon: unknown class id '" + name +
                                  "'");
    }
    return static_cast<std::size_t>(it - wm.classes.begin());
  };
  const std::size_t lib = find_class(liberty_class);
  const std::size_t opp = find_class(oppression_class);

  Lexicon lexicon;
  for (std::size_t r = 0; r < wm.vocab.size(); ++r) {
    std::vector<std::pair<std::string, double>> aux;
    aux.reserve(wm.classes.size());
    for (std::size_t c = 0; c < wm.classes.size(); ++c) {
      aux.emplace_back(wm.classes[c], wm.at(r, c));
    }
    lexicon.add(wm.vocab[r], wm.at(r, lib) - wm.at(r, opp), std::move(aux));
  }
  auto& meta = lexicon.metadata();
  meta["method"] = "CS";
  meta["liberty_class"] = liberty_class;
  meta["oppression_class"] = oppression_class;
  return lexicon;
}

void export_word_doc_triplets(const WordDocMatrix& wd, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cs_lexicon: cannot write file: " + path);
  for (std::size_t d = 0; d < wd.columns.size(); ++d) {
    for (const auto& [row, value] : wd.columns[d]) {
      out << wd.vocab[static_cast<std::size_t>(row)] << " " << wd.doc_ids[d]
          << " " << format_score(value) << "\n";
    }
  }
}

void export_word_moral_triplets(const WordMoralMatrix& wm,
                                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cs_lexicon: cannot write file: " + path);
  for (std::size_t r = 0; r < wm.vocab.size(); ++r) {
    for (std::size_t c = 0; c < wm.classes.size(); ++c) {
      out << wm.vocab[r] << " " << wm.classes[c] << " "
          << format_score(wm.at(r, c)) << "\n";
    }
  }
}

}  // namespace morallex
