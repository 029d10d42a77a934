#include "morallex/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "morallex/util/log.hpp"
#include "morallex/util/rng.hpp"
#include "morallex/util/text.hpp"

namespace morallex {

using nlohmann::json;

std::string scheme_name(LabelScheme scheme) {
  switch (scheme) {
    case LabelScheme::Ternary: return "ternary";
    case LabelScheme::BinaryMoral: return "binary_moral";
    case LabelScheme::BinarySide: return "binary_side";
  }
  return "?";
}

LabelScheme parse_scheme(const std::string& name) {
  if (name == "ternary") return LabelScheme::Ternary;
  if (name == "binary_moral") return LabelScheme::BinaryMoral;
  if (name == "binary_side") return LabelScheme::BinarySide;
  throw std::invalid_argument("corpus: unknown label scheme '" + name + "'");
}

const std::vector<std::string>& scheme_labels(LabelScheme scheme) {
  static const std::vector<std::string> ternary = {"Liberty", "Neutral",
                                                   "Oppression"};
  static const std::vector<std::string> binary_moral = {"Moral", "Neutral"};
  static const std::vector<std::string> binary_side = {"Libertarian",
                                                       "Conservative"};
  switch (scheme) {
    case LabelScheme::Ternary: return ternary;
    case LabelScheme::BinaryMoral: return binary_moral;
    case LabelScheme::BinarySide: return binary_side;
  }
  return ternary;
}

bool is_legal_label(LabelScheme scheme, const std::string& value) {
  const auto& labels = scheme_labels(scheme);
  return std::find(labels.begin(), labels.end(), value) != labels.end();
}

bool same_label(const LabelValue& a, const LabelValue& b) {
  if (a.scheme != b.scheme) {
    throw std::logic_error("corpus: comparing labels across schemes (" +
                           scheme_name(a.scheme) + " vs " +
                           scheme_name(b.scheme) + ")");
  }
  return a.value == b.value;
}

std::vector<const Document*> LabeledDataset::train_documents() const {
  if (!split || split->kind != SplitAssignment::Kind::TrainTest) {
    throw std::logic_error("corpus: dataset '" + name +
                           "' has no train/test assignment");
  }
  std::vector<const Document*> out;
  for (const auto& doc : documents) {
    auto it = split->assignment.find(doc.id);
    if (it != split->assignment.end() && it->second == 0) out.push_back(&doc);
  }
  return out;
}

std::vector<const Document*> LabeledDataset::test_documents() const {
  if (!split || split->kind != SplitAssignment::Kind::TrainTest) {
    throw std::logic_error("corpus: dataset '" + name +
                           "' has no train/test assignment");
  }
  std::vector<const Document*> out;
  for (const auto& doc : documents) {
    auto it = split->assignment.find(doc.id);
    if (it != split->assignment.end() && it->second == 1) out.push_back(&doc);
  }
  return out;
}

std::vector<const Document*> LabeledDataset::fold_documents(int index,
                                                            bool in_fold) const {
  if (!split || split->kind != SplitAssignment::Kind::Folds) {
    throw std::logic_error("corpus: dataset '" + name +
                           "' has no fold assignment");
  }
  std::vector<const Document*> out;
  for (const auto& doc : documents) {
    auto it = split->assignment.find(doc.id);
    if (it == split->assignment.end()) continue;
    if ((it->second == index) == in_fold) out.push_back(&doc);
  }
  return out;
}

std::map<std::string, std::size_t> LabeledDataset::label_counts() const {
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : documents) ++counts[doc.label.value];
  return counts;
}

// --- I/O ---------------------------------------------------------------

LabeledDataset load_jsonl(const std::string& path, LabelScheme scheme,
                          const std::string& name) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("corpus: cannot open file: " + path);

  LabeledDataset dataset;
  dataset.scheme = scheme;
  dataset.name = name.empty() ? path : name;

  std::string line;
  std::size_t line_no = 0;
  std::unordered_set<std::string> seen_ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error("corpus: " + path + ":" +
                               std::to_string(line_no) +
                               ": malformed JSON: " + e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj.contains("text") ||
        !obj.contains("label")) {
      throw std::runtime_error("corpus: " + path + ":" +
                               std::to_string(line_no) +
                               ": expected object with id, text, label");
    }
    Document doc;
    doc.id = obj.at("id").is_string() ? obj.at("id").get<std::string>()
                                      : obj.at("id").dump();
    doc.raw_text = obj.at("text").get<std::string>();
    const std::string label = obj.at("label").get<std::string>();
    if (!is_legal_label(scheme, label)) {
      throw std::runtime_error(
          "corpus: " + path + ":" + std::to_string(line_no) +
          ": label '" + label + "' is not legal under scheme " +
          scheme_name(scheme));
    }
    doc.label = LabelValue{scheme, label};
    if (obj.contains("tokens")) {
      doc.tokens = obj.at("tokens").get<std::vector<std::string>>();
    }
    if (!seen_ids.insert(doc.id).second) {
      throw std::runtime_error("corpus: " + path + ":" +
                               std::to_string(line_no) +
                               ": duplicate document id '" + doc.id + "'");
    }
    dataset.documents.push_back(std::move(doc));
  }
  if (dataset.documents.empty()) {
    log::warn("corpus: dataset '" + dataset.name + "' has zero documents");
  }
  return dataset;
}

void save_jsonl(const LabeledDataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("corpus: cannot write file: " + path);
  for (const auto& doc : dataset.documents) {
    json obj;
    obj["id"] = doc.id;
    obj["text"] = doc.raw_text;
    obj["label"] = doc.label.value;
    if (!doc.tokens.empty()) obj["tokens"] = doc.tokens;
    out << obj.dump() << "\n";
  }
  if (!out) throw std::runtime_error("corpus: write failed: " + path);
}

void save_split_manifest(const SplitAssignment& split, const std::string& path) {
  json obj;
  if (split.kind == SplitAssignment::Kind::TrainTest) {
    obj["kind"] = "train_test";
    json assignment;
    for (const auto& [id, side] : split.assignment) {
      assignment[id] = side == 0 ? "train" : "test";
    }
    obj["assignment"] = assignment;
  } else {
    obj["kind"] = "folds";
    obj["folds"] = split.num_folds;
    json assignment;
    for (const auto& [id, fold] : split.assignment) assignment[id] = fold;
    obj["assignment"] = assignment;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("corpus: cannot write file: " + path);
  out << obj.dump(2) << "\n";
}

SplitAssignment load_split_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("corpus: cannot open file: " + path);
  json obj = json::parse(in);
  SplitAssignment split;
  const std::string kind = obj.at("kind").get<std::string>();
  if (kind == "train_test") {
    split.kind = SplitAssignment::Kind::TrainTest;
    for (const auto& [id, side] : obj.at("assignment").items()) {
      const std::string s = side.get<std::string>();
      if (s != "train" && s != "test") {
        throw std::runtime_error("corpus: split manifest: bad side '" + s +
                                 "' for id '" + id + "'");
      }
      split.assignment[id] = s == "train" ? 0 : 1;
    }
  } else if (kind == "folds") {
    split.kind = SplitAssignment::Kind::Folds;
    split.num_folds = obj.at("folds").get<int>();
    for (const auto& [id, fold] : obj.at("assignment").items()) {
      split.assignment[id] = fold.get<int>();
    }
  } else {
    throw std::runtime_error("corpus: split manifest: unknown kind '" + kind +
                             "'");
  }
  return split;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("corpus: cannot open stopword file: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#') continue;
    words.insert(line);
  }
  return words;
}

// --- Transformations ----------------------------------------------------

LabeledDataset preprocess(const LabeledDataset& dataset,
                          const std::unordered_set<std::string>& stopwords) {
  LabeledDataset out = dataset;
  std::size_t empty_count = 0;
  for (auto& doc : out.documents) {
    doc.tokens.clear();
    for (auto& token : split_alphabetic_lower(doc.raw_text)) {
      if (stopwords.count(token)) continue;
      if (decode_utf8(token).size() < 3) continue;
      doc.tokens.push_back(std::move(token));
    }
    if (doc.tokens.empty()) ++empty_count;
  }
  if (empty_count > 0) {
    log::warn("corpus: " + std::to_string(empty_count) + " document(s) in '" +
              dataset.name + "' have no tokens after preprocessing; kept "
              "(use drop_empty to remove)");
  }
  return out;
}

LabeledDataset drop_empty(const LabeledDataset& dataset) {
  LabeledDataset out = dataset;
  out.documents.clear();
  for (const auto& doc : dataset.documents) {
    if (!doc.tokens.empty()) out.documents.push_back(doc);
  }
  const std::size_t dropped = dataset.documents.size() - out.documents.size();
  if (dropped > 0) {
    log::info("corpus: dropped " + std::to_string(dropped) +
              " empty document(s) from '" + dataset.name + "'");
  }
  return out;
}

LabeledDataset binarize(const LabeledDataset& dataset) {
  if (dataset.scheme != LabelScheme::Ternary) {
    throw std::invalid_argument(
        "corpus: binarize requires a ternary dataset, got scheme " +
        scheme_name(dataset.scheme));
  }
  LabeledDataset out = dataset;
  out.scheme = LabelScheme::BinaryMoral;
  for (auto& doc : out.documents) {
    const std::string& v = doc.label.value;
    doc.label = LabelValue{LabelScheme::BinaryMoral,
                           v == "Neutral" ? "Neutral" : "Moral"};
  }
  return out;
}

LabeledDataset balance(const LabeledDataset& dataset, std::uint64_t seed) {
  const auto counts = dataset.label_counts();
  if (counts.size() != 2) {
    throw std::invalid_argument(
        "corpus: balance requires exactly two label values present, found " +
        std::to_string(counts.size()));
  }
  auto it = counts.begin();
  const auto& [label_a, count_a] = *it;
  const auto& [label_b, count_b] = *std::next(it);
  const std::string majority = count_a >= count_b ? label_a : label_b;
  const std::size_t keep = std::min(count_a, count_b);

  // Shuffle majority positions, keep the first `keep`, preserve input order.
  std::vector<std::size_t> majority_pos;
  for (std::size_t i = 0; i < dataset.documents.size(); ++i) {
    if (dataset.documents[i].label.value == majority) majority_pos.push_back(i);
  }
  Rng rng(seed);
  rng.shuffle(majority_pos);
  std::vector<bool> keep_mask(dataset.documents.size(), true);
  for (std::size_t i = keep; i < majority_pos.size(); ++i) {
    keep_mask[majority_pos[i]] = false;
  }

  LabeledDataset out = dataset;
  out.documents.clear();
  for (std::size_t i = 0; i < dataset.documents.size(); ++i) {
    if (keep_mask[i]) out.documents.push_back(dataset.documents[i]);
  }
  return out;
}

LabeledDataset split(const LabeledDataset& dataset, double test_fraction,
                     std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument(
        "corpus: test_fraction must be strictly between 0 and 1");
  }
  SplitAssignment assignment;
  assignment.kind = SplitAssignment::Kind::TrainTest;

  std::map<std::string, std::vector<std::string>> ids_by_label;
  for (const auto& doc : dataset.documents) {
    ids_by_label[doc.label.value].push_back(doc.id);
  }
  Rng rng(seed);
  for (auto& [label, ids] : ids_by_label) {
    rng.shuffle(ids);
    const auto n = static_cast<long long>(ids.size());
    const auto n_test = std::llround(test_fraction * static_cast<double>(n));
    if (n_test <= 0 || n_test >= n) {
      log::warn("corpus: class '" + label + "' (" + std::to_string(n) +
                " docs) too small to appear on both sides; placed in train");
      for (const auto& id : ids) assignment.assignment[id] = 0;
      continue;
    }
    for (long long i = 0; i < n; ++i) {
      assignment.assignment[ids[static_cast<std::size_t>(i)]] =
          i < n_test ? 1 : 0;
    }
  }
  LabeledDataset out = dataset;
  out.split = std::move(assignment);
  return out;
}

SplitAssignment kfold(const LabeledDataset& dataset, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("corpus: kfold requires k >= 2");
  if (static_cast<std::size_t>(k) > dataset.documents.size()) {
    throw std::invalid_argument("corpus: kfold requires k <= document count");
  }
  SplitAssignment assignment;
  assignment.kind = SplitAssignment::Kind::Folds;
  assignment.num_folds = k;

  std::map<std::string, std::vector<std::string>> ids_by_label;
  for (const auto& doc : dataset.documents) {
    ids_by_label[doc.label.value].push_back(doc.id);
  }
  Rng rng(seed);
  // Rotating offset keeps global fold sizes within one of each other even
  // though extras are handed out per class.
  int offset = 0;
  for (auto& [label, ids] : ids_by_label) {
    rng.shuffle(ids);
    const int n = static_cast<int>(ids.size());
    const int base = n / k;
    const int extras = n % k;
    int pos = 0;
    for (int f = 0; f < k; ++f) {
      int size = base;
      const int rel = (f - offset % k + k) % k;
      if (rel < extras) ++size;
      for (int j = 0; j < size; ++j) {
        assignment.assignment[ids[static_cast<std::size_t>(pos++)]] = f;
      }
    }
    offset = (offset + extras) % k;
  }
  return assignment;
}

}  // namespace morallex
