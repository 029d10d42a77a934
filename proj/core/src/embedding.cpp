#include "morallex/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "morallex/util/log.hpp"
#include "morallex/util/rng.hpp"
#include "morallex/util/text.hpp"

namespace morallex {

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> vocabulary, int dim,
                                 std::vector<float> vectors)
    : vocabulary_(std::move(vocabulary)), dim_(dim), vectors_(std::move(vectors)) {
  if (dim_ <= 0) throw std::invalid_argument("embedding: dim must be positive");
  if (vectors_.size() != vocabulary_.size() * static_cast<std::size_t>(dim_)) {
    throw std::invalid_argument("embedding: vector table size mismatch");
  }
  index_.reserve(vocabulary_.size());
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    if (!index_.emplace(vocabulary_[i], static_cast<int>(i)).second) {
      throw std::invalid_argument("embedding: duplicate token '" +
                                  vocabulary_[i] + "'");
    }
  }
}

int EmbeddingMatrix::find(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? -1 : it->second;
}

std::span<const float> EmbeddingMatrix::row(int index) const {
  return {vectors_.data() + static_cast<std::size_t>(index) * dim_,
          static_cast<std::size_t>(dim_)};
}

double EmbeddingMatrix::cosine(const std::string& a, const std::string& b) const {
  const int ia = find(a);
  if (ia < 0) throw std::out_of_range("embedding: token not in vocabulary: " + a);
  const int ib = find(b);
  if (ib < 0) throw std::out_of_range("embedding: token not in vocabulary: " + b);
  const auto va = row(ia);
  const auto vb = row(ib);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int i = 0; i < dim_; ++i) {
    dot += static_cast<double>(va[i]) * vb[i];
    na += static_cast<double>(va[i]) * va[i];
    nb += static_cast<double>(vb[i]) * vb[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw std::domain_error("embedding: zero-norm vector in cosine(" + a +
                            ", " + b + ")");
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

struct TrainState {
  std::vector<std::vector<int>> sentences;
  std::vector<long long> counts;  // per vocab index
  long long total_words = 0;      // post-filter token count
  std::vector<double> neg_cumulative;
  std::vector<float> syn0;
  std::vector<float> syn1;
  std::atomic<long long> words_done{0};
};

inline int sample_negative(const std::vector<double>& cumulative, Rng& rng) {
  const double u = rng.real01() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(
      it - cumulative.begin(), static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
}

inline double log_sigmoid(double x) {
  // -softplus(-x), stable on both tails.
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// Process sentences [begin, end); returns (loss sum, positive pair count).
std::pair<double, long long> train_range(TrainState& state,
                                         const SkipgramConfig& config,
                                         std::size_t begin, std::size_t end,
                                         std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  const int dim = config.dim;
  const double lr0 = config.initial_learning_rate;
  const double total_planned =
      static_cast<double>(config.epochs) * static_cast<double>(state.total_words) + 1.0;
  std::vector<float> hidden_grad(static_cast<std::size_t>(dim));
  double loss_sum = 0.0;
  long long pairs = 0;

  for (std::size_t s = begin; s < end; ++s) {
    const auto& full_sentence = state.sentences[s];

    // Optional frequent-word subsampling, applied per occurrence.
    std::vector<int> sentence;
    if (config.subsample) {
      sentence.reserve(full_sentence.size());
      for (int w : full_sentence) {
        const double f = static_cast<double>(state.counts[static_cast<std::size_t>(w)]) /
                         static_cast<double>(state.total_words);
        const double t = config.subsample_threshold;
        const double keep = (std::sqrt(f / t) + 1.0) * t / f;
        if (keep >= 1.0 || rng.real01() < keep) sentence.push_back(w);
      }
    }
    const auto& sen = config.subsample ? sentence : full_sentence;

    const double progress =
        static_cast<double>(state.words_done.load(std::memory_order_relaxed)) /
        total_planned;
    const double lr = lr0 * std::max(1.0 - progress, 1e-4);

    const int len = static_cast<int>(sen.size());
    for (int pos = 0; pos < len; ++pos) {
      const int center = sen[pos];
      const int reduced = 1 + static_cast<int>(rng.below(
                                  static_cast<std::uint64_t>(config.window)));
      const int lo = std::max(0, pos - reduced);
      const int hi = std::min(len - 1, pos + reduced);
      float* v = state.syn0.data() + static_cast<std::size_t>(center) * dim;
      for (int cpos = lo; cpos <= hi; ++cpos) {
        if (cpos == pos) continue;
        const int context = sen[static_cast<std::size_t>(cpos)];
        std::fill(hidden_grad.begin(), hidden_grad.end(), 0.0f);
        for (int k = 0; k <= config.negative_samples; ++k) {
          int target;
          float label;
          if (k == 0) {
            target = context;
            label = 1.0f;
          } else {
            target = sample_negative(state.neg_cumulative, rng);
            if (target == context) continue;
            label = 0.0f;
          }
          float* u = state.syn1.data() + static_cast<std::size_t>(target) * dim;
          double dot = 0.0;
          for (int i = 0; i < dim; ++i) dot += static_cast<double>(v[i]) * u[i];
          const double sig = 1.0 / (1.0 + std::exp(-dot));
          const float g = static_cast<float>((label - sig) * lr);
          loss_sum += label > 0.5f ? -log_sigmoid(dot) : -log_sigmoid(-dot);
          for (int i = 0; i < dim; ++i) hidden_grad[static_cast<std::size_t>(i)] += g * u[i];
          for (int i = 0; i < dim; ++i) u[i] += g * v[i];
        }
        for (int i = 0; i < dim; ++i) v[i] += hidden_grad[static_cast<std::size_t>(i)];
        ++pairs;
      }
    }
    state.words_done.fetch_add(static_cast<long long>(full_sentence.size()),
                               std::memory_order_relaxed);
  }
  return {loss_sum, pairs};
}

}  // namespace

EmbeddingMatrix train_skipgram(
    const std::vector<std::vector<std::string>>& corpus,
    const SkipgramConfig& config) {
  if (config.dim <= 0 || config.window <= 0 || config.epochs <= 0 ||
      config.negative_samples < 0 || config.min_count < 0) {
    throw std::invalid_argument("embedding: invalid skip-gram configuration");
  }

  // Vocabulary: frequency >= min_count, ordered by count desc, token asc.
  std::unordered_map<std::string, long long> raw_counts;
  for (const auto& doc : corpus) {
    for (const auto& token : doc) ++raw_counts[token];
  }
  std::vector<std::pair<std::string, long long>> kept;
  for (const auto& [token, count] : raw_counts) {
    if (count >= config.min_count) kept.emplace_back(token, count);
  }
  if (kept.empty()) {
    throw std::runtime_error(
        "embedding: vocabulary empty after min_count filtering");
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  std::vector<std::string> vocab;
  vocab.reserve(kept.size());
  std::unordered_map<std::string, int> index;
  TrainState state;
  state.counts.reserve(kept.size());
  for (const auto& [token, count] : kept) {
    index.emplace(token, static_cast<int>(vocab.size()));
    vocab.push_back(token);
    state.counts.push_back(count);
    state.total_words += count;
  }

  state.sentences.reserve(corpus.size());
  for (const auto& doc : corpus) {
    std::vector<int> sentence;
    sentence.reserve(doc.size());
    for (const auto& token : doc) {
      auto it = index.find(token);
      if (it != index.end()) sentence.push_back(it->second);
    }
    if (sentence.size() >= 2) state.sentences.push_back(std::move(sentence));
  }

  // Negative-sampling distribution: count^0.75.
  state.neg_cumulative.reserve(vocab.size());
  double acc = 0.0;
  for (long long c : state.counts) {
    acc += std::pow(static_cast<double>(c), 0.75);
    state.neg_cumulative.push_back(acc);
  }

  const std::size_t n = vocab.size();
  const std::size_t table = n * static_cast<std::size_t>(config.dim);
  state.syn0.resize(table);
  state.syn1.assign(table, 0.0f);
  Rng init_rng(config.seed);
  for (auto& w : state.syn0) {
    w = static_cast<float>((init_rng.real01() - 0.5) / config.dim);
  }

  const int threads = std::max(1, config.threads);
  if (threads > 1) {
    log::info("embedding: concurrent training with " + std::to_string(threads) +
              " workers; results are nondeterministic");
  }

  std::vector<double> epoch_losses;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double loss_sum = 0.0;
    long long pairs = 0;
    if (threads == 1) {
      auto [l, p] = train_range(state, config, 0, state.sentences.size(),
                                config.seed + 0x9E3779B97F4A7C15ULL *
                                                  static_cast<std::uint64_t>(epoch + 1));
      loss_sum = l;
      pairs = p;
    } else {
      std::vector<std::thread> workers;
      std::vector<std::pair<double, long long>> results(
          static_cast<std::size_t>(threads));
      const std::size_t chunk = (state.sentences.size() + threads - 1) / threads;
      for (int t = 0; t < threads; ++t) {
        const std::size_t begin = std::min(state.sentences.size(), chunk * t);
        const std::size_t end = std::min(state.sentences.size(), begin + chunk);
        workers.emplace_back([&, t, begin, end] {
          results[static_cast<std::size_t>(t)] = train_range(
              state, config, begin, end,
              config.seed + 0x9E3779B97F4A7C15ULL *
                                static_cast<std::uint64_t>(epoch * threads + t + 1));
        });
      }
      for (auto& w : workers) w.join();
      for (const auto& [l, p] : results) {
        loss_sum += l;
        pairs += p;
      }
    }
    const double avg = pairs > 0 ? loss_sum / static_cast<double>(pairs) : 0.0;
    if (!std::isfinite(avg)) {
      throw std::runtime_error("embedding: non-finite training loss in epoch " +
                               std::to_string(epoch + 1));
    }
    epoch_losses.push_back(avg);
    log::debug("embedding: epoch " + std::to_string(epoch + 1) + " loss " +
               format_score(avg));
  }

  EmbeddingMatrix matrix(std::move(vocab), config.dim, std::move(state.syn0));
  std::map<std::string, std::string> record;
  record["dim"] = std::to_string(config.dim);
  record["window"] = std::to_string(config.window);
  record["negative_samples"] = std::to_string(config.negative_samples);
  record["epochs"] = std::to_string(config.epochs);
  record["initial_learning_rate"] = format_score(config.initial_learning_rate);
  record["min_count"] = std::to_string(config.min_count);
  record["seed"] = std::to_string(config.seed);
  record["subsample"] = config.subsample ? "true" : "false";
  record["threads"] = std::to_string(threads);
  record["deterministic"] = threads == 1 ? "true" : "false";
  matrix.set_train_config(std::move(record));
  matrix.set_epoch_losses(std::move(epoch_losses));
  return matrix;
}

void save_embeddings(const EmbeddingMatrix& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("embedding: cannot write file: " + path);
  out << matrix.size() << " " << matrix.dim() << "\n";
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out << matrix.vocabulary()[i];
    for (float v : matrix.row(static_cast<int>(i))) {
      out << " " << format_float(v);
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("embedding: write failed: " + path);
}

EmbeddingMatrix load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("embedding: cannot open file: " + path);
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("embedding: empty vector file: " + path);
  }
  std::istringstream hs(header);
  std::size_t count = 0;
  int dim = 0;
  if (!(hs >> count >> dim) || dim <= 0) {
    throw std::runtime_error("embedding: bad header in " + path);
  }

  std::vector<std::string> vocab;
  vocab.reserve(count);
  std::vector<float> vectors;
  vectors.reserve(count * static_cast<std::size_t>(dim));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string token;
    ls >> token;
    float value;
    int got = 0;
    while (ls >> value) {
      vectors.push_back(value);
      ++got;
    }
    if (got != dim) {
      throw std::runtime_error("embedding: token '" + token + "' has " +
                               std::to_string(got) + " values, expected " +
                               std::to_string(dim));
    }
    vocab.push_back(token);
  }
  if (vocab.size() != count) {
    log::warn("embedding: header declared " + std::to_string(count) +
              " tokens, file contains " + std::to_string(vocab.size()));
  }
  return EmbeddingMatrix(std::move(vocab), dim, std::move(vectors));
}

}  // namespace morallex
