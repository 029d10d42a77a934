// Microbenchmarks for the pipeline's hot paths.
#include <benchmark/benchmark.h>

#include "morallex/corpus.hpp"
#include "morallex/cs_lexicon.hpp"
#include "morallex/embedding.hpp"
#include "morallex/featurize.hpp"
#include "morallex/friedman.hpp"
#include "morallex/logreg.hpp"
#include "morallex/util/rng.hpp"
#include "morallex/we_lexicon.hpp"
#include "synthetic.hpp"

using namespace morallex;

namespace {

synthetic::PlantedCorpus bench_corpus(int documents) {
  synthetic::PlantedConfig config;
  config.documents = documents;
  config.markers_per_class = 50;
  config.neutral_tokens = 500;
  config.seed = 7;
  return synthetic::make_planted_corpus(config);
}

std::vector<std::vector<std::string>> token_lists(const LabeledDataset& ds) {
  std::vector<std::vector<std::string>> out;
  for (const auto& doc : ds.documents) out.push_back(doc.tokens);
  return out;
}

}  // namespace

static void BM_Preprocess(benchmark::State& state) {
  auto corpus = bench_corpus(static_cast<int>(state.range(0)));
  const auto& stopwords = english_stopwords();
  for (auto _ : state) {
    benchmark::DoNotOptimize(preprocess(corpus.dataset, stopwords));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Preprocess)->Arg(500)->Arg(2000);

static void BM_TrainSkipgram(benchmark::State& state) {
  const auto corpus = bench_corpus(300);
  const auto lists = token_lists(corpus.dataset);
  SkipgramConfig config;
  config.dim = static_cast<int>(state.range(0));
  config.epochs = 1;
  config.min_count = 2;
  config.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_skipgram(lists, config));
  }
}
BENCHMARK(BM_TrainSkipgram)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_GenerateWeLexicon(benchmark::State& state) {
  const auto corpus = bench_corpus(300);
  SkipgramConfig config;
  config.dim = 50;
  config.epochs = 1;
  config.min_count = 2;
  config.seed = 3;
  const auto matrix = train_skipgram(token_lists(corpus.dataset), config);
  SeedSets seeds;
  for (int i = 0; i < 20; ++i) {
    seeds.liberty.push_back(corpus.liberty_markers[i]);
    seeds.oppression.push_back(corpus.oppression_markers[i]);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_we(matrix, seeds));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<long long>(matrix.size()));
}
BENCHMARK(BM_GenerateWeLexicon)->Unit(benchmark::kMillisecond);

static void BM_ComposeCsMatrices(benchmark::State& state) {
  const auto corpus = bench_corpus(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const auto [wd, dm] = build_matrices(corpus.dataset, 2);
    benchmark::DoNotOptimize(normalize(compose(wd, dm)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ComposeCsMatrices)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_FitTruncatedSvd(benchmark::State& state) {
  Rng rng(11);
  const Eigen::Index n = 200;
  const Eigen::Index d = state.range(0);
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rng.gaussian();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(SvdReducer::fit(x, 50, 1, "bench", "bench"));
  }
}
BENCHMARK(BM_FitTruncatedSvd)->Arg(300)->Arg(1500)->Unit(benchmark::kMillisecond);

static void BM_FitLogReg(benchmark::State& state) {
  Rng rng(13);
  const Eigen::Index n = 400;
  const Eigen::Index d = state.range(0);
  Eigen::MatrixXd x(n, d);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int label = i % 2;
    y[static_cast<std::size_t>(i)] = label;
    for (Eigen::Index j = 0; j < d; ++j) {
      x(i, j) = rng.gaussian() + (label == 1 && j < 5 ? 0.8 : 0.0);
    }
  }
  LogRegConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_logreg(x, y, config));
  }
}
BENCHMARK(BM_FitLogReg)->Arg(50)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_FriedmanExact(benchmark::State& state) {
  Rng rng(17);
  const std::size_t k = 4;
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<std::vector<double>> scores(k, std::vector<double>(n));
  for (auto& row : scores) {
    for (auto& v : row) v = rng.real01();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(friedman_rank(scores, 0.05));
  }
}
BENCHMARK(BM_FriedmanExact)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
