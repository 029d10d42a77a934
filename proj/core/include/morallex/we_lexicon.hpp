#ifndef MORALLEX_WE_LEXICON_HPP
#define MORALLEX_WE_LEXICON_HPP

#include <optional>

#include "morallex/embedding.hpp"
#include "morallex/lexicon.hpp"
#include "morallex/seeds.hpp"

namespace morallex {

struct WeLexiconOptions {
  // When set, only embedding-vocabulary tokens with corpus frequency >=
  // min_frequency are scored; `frequencies` must then be provided.
  std::optional<long long> min_frequency;
  const FrequencyTable* frequencies = nullptr;
  // Divide each seed-set sum by the set size (robustness option for
  // asymmetric seed lists; off keeps the raw sums).
  bool mean_normalize = false;
};

// score(w) = sum_{s in liberty seeds} cos(w, s) - sum_{s in oppression
// seeds} cos(w, s) for every vocabulary token passing the filter. Seeds
// missing from the vocabulary are dropped with a warning; each side must
// keep at least one seed.
Lexicon generate_we(const EmbeddingMatrix& matrix, const SeedSets& seeds,
                    const WeLexiconOptions& options = {});

}  // namespace morallex

#endif
