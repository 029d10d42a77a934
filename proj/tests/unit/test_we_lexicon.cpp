#include <doctest.h>

#include <cmath>

#include "morallex/we_lexicon.hpp"
#include "morallex/util/rng.hpp"
#include "oracles.hpp"

using namespace morallex;

namespace {

EmbeddingMatrix random_matrix(int words, int dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> vocab;
  std::vector<float> vectors;
  for (int w = 0; w < words; ++w) {
    vocab.push_back("w" + std::to_string(w));
    for (int d = 0; d < dim; ++d) {
      vectors.push_back(static_cast<float>(rng.gaussian()));
    }
  }
  return EmbeddingMatrix(std::move(vocab), dim, std::move(vectors));
}

}  // namespace

TEST_CASE("a word on the liberty seed, orthogonal to the oppression seed") {
  EmbeddingMatrix m({"word", "libseed", "oppseed"}, 2,
                    {1.0f, 0.0f, 1.0f, 0.0f, 0.0f, 1.0f});
  SeedSets seeds;
  seeds.liberty = {"libseed"};
  seeds.oppression = {"oppseed"};
  const auto lex = generate_we(m, seeds);
  CHECK(*lex.score("word") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lex.method() == "WE");
}

TEST_CASE("symmetric seed sets give score zero") {
  // word=(1,0); seeds at (1,1) and (1,-1) are mirror images around it.
  EmbeddingMatrix m({"word", "up", "down"}, 2,
                    {1.0f, 0.0f, 1.0f, 1.0f, 1.0f, -1.0f});
  SeedSets seeds;
  seeds.liberty = {"up"};
  seeds.oppression = {"down"};
  const auto lex = generate_we(m, seeds);
  CHECK(*lex.score("word") == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("scores equal a brute-force cosine double loop") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed * 31 + 7);
    const int words = 10 + static_cast<int>(rng.below(41));
    const int dim = 2 + static_cast<int>(rng.below(7));
    const auto m = random_matrix(words, dim, seed + 1000);
    SeedSets seeds;
    const int per_side = 1 + static_cast<int>(rng.below(5));  // 2*5 <= words
    for (int i = 0; i < per_side; ++i) {
      seeds.liberty.push_back("w" + std::to_string(i));
      seeds.oppression.push_back("w" + std::to_string(per_side + i));
    }
    const auto lex = generate_we(m, seeds);
    const auto expected = oracles::we_scores(m, seeds);
    REQUIRE(lex.size() == m.size());
    for (const auto& entry : lex.entries()) {
      CHECK(entry.score ==
            doctest::Approx(expected.at(entry.token)).epsilon(1e-12));
    }
  }
}

TEST_CASE("exchanging seed sets negates every score") {
  const auto m = random_matrix(20, 4, 5);
  SeedSets seeds;
  seeds.liberty = {"w0", "w1"};
  seeds.oppression = {"w2", "w3"};
  SeedSets swapped;
  swapped.liberty = seeds.oppression;
  swapped.oppression = seeds.liberty;
  const auto lex = generate_we(m, seeds);
  const auto neg = generate_we(m, swapped);
  for (const auto& entry : lex.entries()) {
    CHECK(*neg.score(entry.token) ==
          doctest::Approx(-entry.score).epsilon(1e-12));
  }
}

TEST_CASE("scores are invariant under positive row rescaling") {
  std::vector<float> vectors = {1.0f, 2.0f,  -1.0f, 0.5f,
                                0.3f, -0.7f, 2.0f,  4.0f};
  EmbeddingMatrix m({"a", "b", "c", "scaled"}, 2, vectors);
  // "scaled" = 2 * "a"
  SeedSets seeds;
  seeds.liberty = {"b"};
  seeds.oppression = {"c"};
  const auto lex = generate_we(m, seeds);
  CHECK(*lex.score("scaled") == doctest::Approx(*lex.score("a")).epsilon(1e-12));
}

TEST_CASE("seed words themselves are scored") {
  const auto m = random_matrix(6, 3, 9);
  SeedSets seeds;
  seeds.liberty = {"w0"};
  seeds.oppression = {"w1"};
  const auto lex = generate_we(m, seeds);
  CHECK(lex.contains("w0"));
  CHECK(lex.contains("w1"));
}

TEST_CASE("absent seeds are dropped; empty sides are an error") {
  const auto m = random_matrix(4, 3, 2);
  SeedSets seeds;
  seeds.liberty = {"w0", "not_in_vocab"};
  seeds.oppression = {"w1"};
  const auto lex = generate_we(m, seeds);  // warns, still works
  CHECK(lex.size() == 4);

  SeedSets all_missing;
  all_missing.liberty = {"nope"};
  all_missing.oppression = {"w1"};
  CHECK_THROWS_AS(generate_we(m, all_missing), std::runtime_error);
}

TEST_CASE("the frequency filter restricts the scored vocabulary") {
  const auto m = random_matrix(5, 3, 3);
  SeedSets seeds;
  seeds.liberty = {"w0"};
  seeds.oppression = {"w1"};
  FrequencyTable freq;
  freq.counts = {{"w0", 50}, {"w1", 50}, {"w2", 50}, {"w3", 3}, {"w4", 2}};
  freq.total = 155;
  WeLexiconOptions options;
  options.min_frequency = 10;
  options.frequencies = &freq;
  const auto lex = generate_we(m, seeds, options);
  CHECK(lex.size() == 3);
  CHECK_FALSE(lex.contains("w3"));
  CHECK_FALSE(lex.contains("w4"));
}

TEST_CASE("mean normalization divides each side by its seed count") {
  EmbeddingMatrix m({"word", "l1", "l2", "o1"}, 2,
                    {1.0f, 0.0f, 1.0f, 0.0f, 1.0f, 0.0f, 0.0f, 1.0f});
  SeedSets seeds;
  seeds.liberty = {"l1", "l2"};
  seeds.oppression = {"o1"};
  WeLexiconOptions options;
  options.mean_normalize = true;
  const auto lex = generate_we(m, seeds, options);
  // raw would be 2 - 0; mean-normalized is 1 - 0.
  CHECK(*lex.score("word") == doctest::Approx(1.0).epsilon(1e-12));
}
