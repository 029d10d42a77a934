#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "morallex/cs_lexicon.hpp"
#include "morallex/util/rng.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace morallex;

namespace {

LabeledDataset tokens_dataset(
    LabelScheme scheme,
    std::vector<std::pair<std::vector<std::string>, std::string>> docs) {
  LabeledDataset ds;
  ds.name = "cs";
  ds.scheme = scheme;
  int i = 0;
  for (auto& [tokens, label] : docs) {
    Document doc;
    doc.id = "d" + std::to_string(i++);
    doc.tokens = tokens;
    doc.label = LabelValue{scheme, label};
    ds.documents.push_back(std::move(doc));
  }
  return ds;
}

double wd_value(const WordDocMatrix& wd, const std::string& token,
                std::size_t column) {
  const auto row = std::find(wd.vocab.begin(), wd.vocab.end(), token);
  REQUIRE(row != wd.vocab.end());
  const int row_idx = static_cast<int>(row - wd.vocab.begin());
  for (const auto& [r, v] : wd.columns[column]) {
    if (r == row_idx) return v;
  }
  return 0.0;
}

}  // namespace

TEST_CASE("word-doc columns hold counts over the document length") {
  const auto ds = tokens_dataset(
      LabelScheme::Ternary, {{{"free", "free", "state"}, "Liberty"}});
  const auto [wd, dm] = build_matrices(ds, 0);
  REQUIRE(wd.doc_ids.size() == 1);
  CHECK(wd_value(wd, "free", 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(wd_value(wd, "state", 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("frequency cut-off removes rare tokens from the vocabulary") {
  std::vector<std::pair<std::vector<std::string>, std::string>> docs;
  for (int i = 0; i < 10; ++i) docs.push_back({{"common"}, "Liberty"});
  for (int i = 0; i < 9; ++i) docs.push_back({{"common", "almost"}, "Neutral"});
  const auto ds = tokens_dataset(LabelScheme::Ternary, docs);
  const auto [wd, dm] = build_matrices(ds, 10);
  CHECK(std::find(wd.vocab.begin(), wd.vocab.end(), "almost") == wd.vocab.end());
  CHECK(std::find(wd.vocab.begin(), wd.vocab.end(), "common") != wd.vocab.end());
}

TEST_CASE("ternary datasets produce a three-column moral matrix") {
  const auto ds = tokens_dataset(LabelScheme::Ternary,
                                 {{{"aaa"}, "Liberty"},
                                  {{"bbb"}, "Neutral"},
                                  {{"ccc"}, "Oppression"}});
  const auto [wd, dm] = build_matrices(ds, 0);
  CHECK(dm.classes ==
        std::vector<std::string>{"Liberty", "Neutral", "Oppression"});
  CHECK(dm.class_of_doc == std::vector<int>{0, 1, 2});
}

TEST_CASE("nonempty columns sum to one over the vocabulary") {
  const auto ds = synthetic::random_dataset(40, 25, 17, LabelScheme::Ternary);
  const auto [wd, dm] = build_matrices(ds, 2);
  for (const auto& column : wd.columns) {
    double sum = 0.0;
    for (const auto& [row, value] : column) sum += value;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("build_matrices excludes empty documents and rejects empty vocab") {
  const auto ds = tokens_dataset(LabelScheme::Ternary,
                                 {{{"kept", "kept"}, "Liberty"},
                                  {{}, "Neutral"},
                                  {{"kept"}, "Oppression"}});
  const auto [wd, dm] = build_matrices(ds, 0);
  CHECK(wd.doc_ids.size() == 2);
  CHECK(dm.doc_ids == wd.doc_ids);
  CHECK_THROWS_AS(build_matrices(ds, 100), std::runtime_error);
}

TEST_CASE("compose of identity matrices is the identity") {
  WordDocMatrix wd;
  wd.vocab = {"u", "v"};
  wd.doc_ids = {"d0", "d1"};
  wd.columns = {{{0, 1.0}}, {{1, 1.0}}};
  DocMoralMatrix dm;
  dm.doc_ids = {"d0", "d1"};
  dm.classes = {"A", "B"};
  dm.class_of_doc = {0, 1};
  const auto wm = compose(wd, dm);
  CHECK(wm.at(0, 0) == 1.0);
  CHECK(wm.at(0, 1) == 0.0);
  CHECK(wm.at(1, 0) == 0.0);
  CHECK(wm.at(1, 1) == 1.0);
}

TEST_CASE("compose spreads one word across two documents") {
  WordDocMatrix wd;
  wd.vocab = {"word"};
  wd.doc_ids = {"d0", "d1"};
  wd.columns = {{{0, 0.5}}, {{0, 0.5}}};
  DocMoralMatrix dm;
  dm.doc_ids = {"d0", "d1"};
  dm.classes = {"A", "B"};
  dm.class_of_doc = {0, 1};
  const auto wm = compose(wd, dm);
  CHECK(wm.at(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wm.at(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("compose rejects misaligned document ids") {
  WordDocMatrix wd;
  wd.vocab = {"w"};
  wd.doc_ids = {"d0"};
  wd.columns = {{{0, 1.0}}};
  DocMoralMatrix dm;
  dm.doc_ids = {"other"};
  dm.classes = {"A"};
  dm.class_of_doc = {0};
  CHECK_THROWS_AS(compose(wd, dm), std::invalid_argument);
}

TEST_CASE("compose(build_matrices(...)) equals direct label-mass accumulation") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const int docs = 2 + static_cast<int>(seed % 9);     // <= 10 documents
    const auto ds = synthetic::random_dataset(docs, 20, seed + 500,
                                              LabelScheme::Ternary);
    const auto [wd, dm] = build_matrices(ds, 0);
    const auto wm = compose(wd, dm);
    const auto expected = oracles::label_mass(ds, 0);
    REQUIRE(wm.vocab.size() == expected.size());
    for (std::size_t r = 0; r < wm.vocab.size(); ++r) {
      const auto& per_class = expected.at(wm.vocab[r]);
      for (std::size_t c = 0; c < wm.classes.size(); ++c) {
        const auto it = per_class.find(wm.classes[c]);
        const double want = it == per_class.end() ? 0.0 : it->second;
        CHECK(wm.at(r, c) == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("normalize: liberty-only word becomes a pure liberty row") {
  const auto ds = tokens_dataset(LabelScheme::Ternary,
                                 {{{"onlylib", "filler"}, "Liberty"},
                                  {{"filler"}, "Neutral"},
                                  {{"filler"}, "Oppression"}});
  const auto [wd, dm] = build_matrices(ds, 0);
  const auto wm = normalize(compose(wd, dm));
  const auto row = std::find(wm.vocab.begin(), wm.vocab.end(), "onlylib");
  REQUIRE(row != wm.vocab.end());
  const auto r = static_cast<std::size_t>(row - wm.vocab.begin());
  CHECK(wm.at(r, 0) == doctest::Approx(1.0).epsilon(1e-12));  // Liberty
  CHECK(wm.at(r, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(wm.at(r, 2) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("normalize: single-word single-class matrix becomes [[1]]") {
  WordMoralMatrix raw;
  raw.vocab = {"w"};
  raw.classes = {"A"};
  raw.values = {0.37};
  const auto wm = normalize(raw);
  CHECK(wm.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalize: rows sum to one on random inputs") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    WordMoralMatrix raw;
    raw.classes = {"A", "B", "C"};
    const int words = 3 + static_cast<int>(rng.below(10));
    for (int w = 0; w < words; ++w) {
      raw.vocab.push_back("w" + std::to_string(w));
      for (int c = 0; c < 3; ++c) raw.values.push_back(rng.real01() + 0.01);
    }
    const auto wm = normalize(raw);
    for (std::size_t r = 0; r < wm.vocab.size(); ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < 3; ++c) {
        sum += wm.at(r, c);
        CHECK(wm.at(r, c) >= 0.0);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("normalize rejects a class with no surviving words") {
  WordMoralMatrix raw;
  raw.vocab = {"w"};
  raw.classes = {"A", "B"};
  raw.values = {1.0, 0.0};  // column B sums to zero
  CHECK_THROWS_WITH_AS(normalize(raw), doctest::Contains("B"),
                       std::runtime_error);
}

TEST_CASE("to_lexicon subtracts the oppression column from the liberty one") {
  WordMoralMatrix wm;
  wm.vocab = {"pure", "split", "mixed"};
  wm.classes = {"Liberty", "Neutral", "Oppression"};
  wm.values = {1.0, 0.0, 0.0,   //
               0.5, 0.0, 0.5,   //
               0.6, 0.1, 0.3};
  const auto lex = to_lexicon(wm, "Liberty", "Oppression");
  CHECK(*lex.score("pure") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*lex.score("split") == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(*lex.score("mixed") == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(lex.method() == "CS");
  REQUIRE(lex.find("mixed")->aux.size() == 3);
}

TEST_CASE("to_lexicon rejects unknown class ids") {
  WordMoralMatrix wm;
  wm.vocab = {"w"};
  wm.classes = {"A", "B"};
  wm.values = {0.7, 0.3};
  CHECK_THROWS_AS(to_lexicon(wm, "A", "missing"), std::invalid_argument);
}

TEST_CASE("document order does not change the final lexicon") {
  auto ds = synthetic::random_dataset(30, 15, 77, LabelScheme::BinarySide);
  auto reversed = ds;
  std::reverse(reversed.documents.begin(), reversed.documents.end());
  const auto build = [](const LabeledDataset& d) {
    const auto [wd, dm] = build_matrices(d, 0);
    return to_lexicon(normalize(compose(wd, dm)), "Libertarian",
                      "Conservative");
  };
  const auto a = build(ds);
  const auto b = build(reversed);
  REQUIRE(a.size() == b.size());
  for (const auto& entry : a.entries()) {
    CHECK(*b.score(entry.token) == doctest::Approx(entry.score).epsilon(1e-12));
  }
}

TEST_CASE("scalar scores stay within [-1, 1]") {
  const auto ds = synthetic::random_dataset(60, 30, 41, LabelScheme::Ternary);
  const auto [wd, dm] = build_matrices(ds, 0);
  const auto lex = to_lexicon(normalize(compose(wd, dm)), "Liberty",
                              "Oppression");
  for (const auto& entry : lex.entries()) {
    CHECK(entry.score >= -1.0 - 1e-12);
    CHECK(entry.score <= 1.0 + 1e-12);
  }
}

TEST_CASE("triplet export writes one line per stored entry") {
  const auto ds = tokens_dataset(LabelScheme::Ternary,
                                 {{{"aaa", "bbb"}, "Liberty"}});
  const auto [wd, dm] = build_matrices(ds, 0);
  const auto path =
      (std::filesystem::temp_directory_path() / "wd_triplets.txt").string();
  export_word_doc_triplets(wd, path);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 2);
}
