// morallex command-line interface: wires the library into reproducible
// pipeline stages. Every subcommand writes its declared outputs plus a
// RunManifest JSON beside them.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "morallex/corpus.hpp"
#include "morallex/cs_lexicon.hpp"
#include "morallex/embedding.hpp"
#include "morallex/experiments.hpp"
#include "morallex/featurize.hpp"
#include "morallex/friedman.hpp"
#include "morallex/lexicon.hpp"
#include "morallex/logreg.hpp"
#include "morallex/manifest.hpp"
#include "morallex/seeds.hpp"
#include "morallex/util/digest.hpp"
#include "morallex/util/log.hpp"
#include "morallex/util/text.hpp"
#include "morallex/we_lexicon.hpp"

namespace fs = std::filesystem;
using namespace morallex;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 42;
  int threads = 1;
  bool deterministic = true;
  std::string log_level = "warn";

  int effective_threads() const {
    if (deterministic && threads > 1) {
      log::warn("cli: --threads > 1 ignored in deterministic mode "
                "(pass --no-deterministic for concurrent training)");
      return 1;
    }
    return threads;
  }
};

// Manifest construction shared by every subcommand. Input/output paths are
// recorded as they are named and digested only at finish(), after the stage
// succeeded, so file errors surface from the module that owns them.
struct StageRun {
  RunManifest manifest;
  std::ostringstream config;
  std::vector<std::string> input_paths;
  std::vector<std::string> output_paths;

  explicit StageRun(int argc, char** argv, std::uint64_t seed) {
    std::vector<std::string> parts(argv, argv + argc);
    manifest.command_line = join(parts, " ");
    manifest.seeds = {seed};
    manifest.started_at = iso8601_utc_now();
  }

  template <typename T>
  void param(const std::string& key, const T& value) {
    config << key << "=" << value << "\n";
  }

  void note_input(const std::string& path) { input_paths.push_back(path); }
  void note_output(const std::string& path) { output_paths.push_back(path); }

  void finish(const std::string& manifest_path) {
    for (const auto& path : input_paths) manifest.add_input(path);
    for (const auto& path : output_paths) manifest.add_output(path);
    manifest.config_digest = sha256_hex(config.str());
    manifest.finished_at = iso8601_utc_now();
    write_manifest(manifest, manifest_path);
  }
};

LabeledDataset load_dataset(const std::string& path, const std::string& scheme,
                            const std::string& name = "") {
  return load_jsonl(path, parse_scheme(scheme), name);
}

std::unordered_set<std::string> resolve_stopwords(const std::string& path) {
  return path.empty() ? english_stopwords() : load_stopwords(path);
}

std::vector<std::vector<std::string>> token_lists(const LabeledDataset& ds) {
  std::vector<std::vector<std::string>> out;
  out.reserve(ds.documents.size());
  for (const auto& doc : ds.documents) out.push_back(doc.tokens);
  return out;
}

void require_tokens(const LabeledDataset& ds, const std::string& stage) {
  for (const auto& doc : ds.documents) {
    if (!doc.tokens.empty()) return;
  }
  throw std::runtime_error(stage + ": dataset '" + ds.name +
                           "' has no tokens; run `morallex preprocess` first");
}

std::pair<std::string, std::string> polarity_classes(
    LabelScheme scheme, const std::string& liberty_flag,
    const std::string& oppression_flag) {
  const auto& labels = scheme_labels(scheme);
  std::string liberty = liberty_flag.empty() ? labels.front() : liberty_flag;
  std::string oppression =
      oppression_flag.empty() ? labels.back() : oppression_flag;
  for (const auto& cls : {liberty, oppression}) {
    if (!is_legal_label(scheme, cls)) {
      throw std::runtime_error("cli: class '" + cls +
                               "' is not part of scheme " + scheme_name(scheme));
    }
  }
  return {liberty, oppression};
}

LexiconFeatureMode parse_feature_mode(const std::string& mode) {
  if (mode == "docvec") return LexiconFeatureMode::DocVector;
  if (mode == "stats") return LexiconFeatureMode::Stats;
  if (mode == "extended") return LexiconFeatureMode::Extended;
  throw std::runtime_error("cli: unknown feature mode '" + mode + "'");
}

std::vector<FeatureVector> featurize_documents(const Lexicon& lexicon,
                                               LexiconFeatureMode mode,
                                               const std::vector<Document>& docs) {
  std::vector<FeatureVector> rows;
  rows.reserve(docs.size());
  for (const auto& doc : docs) {
    switch (mode) {
      case LexiconFeatureMode::DocVector:
        rows.push_back(doc_vector(lexicon, doc));
        break;
      case LexiconFeatureMode::Stats:
        rows.push_back(stat_summary(lexicon, doc));
        break;
      case LexiconFeatureMode::Extended:
        rows.push_back(extended_vector(lexicon, doc));
        break;
    }
  }
  return rows;
}

// --- subcommand implementations -------------------------------------------

struct IngestArgs {
  std::string input, scheme = "ternary", name, out;
};

int cmd_ingest(const IngestArgs& args, const GlobalOptions& global, int argc,
               char** argv) {
  StageRun run(argc, argv, global.seed);
  run.param("input", args.input);
  run.param("scheme", args.scheme);
  run.note_input(args.input);

  auto dataset = load_dataset(args.input, args.scheme, args.name);
  const auto counts = dataset.label_counts();
  std::ostringstream stats;
  for (const auto& [label, count] : counts) stats << label << "=" << count << " ";
  log::info("ingest: " + std::to_string(dataset.documents.size()) +
            " documents (" + stats.str() + ")");
  save_jsonl(dataset, args.out);

  run.note_output(args.out);
  run.finish(manifest_path_for(args.out));
  return 0;
}

struct PreprocessArgs {
  std::string input, scheme = "ternary", out, stopwords, split_out;
  bool drop_empty_docs = false;
  bool binarize_labels = false;
  bool balance_classes = false;
  double split_fraction = 0.0;
  int kfold_count = 0;
};

int cmd_preprocess(const PreprocessArgs& args, const GlobalOptions& global,
                   int argc, char** argv) {
  if (args.split_fraction > 0.0 && args.kfold_count > 0) {
    throw std::runtime_error(
        "cli: --split-fraction and --kfold are mutually exclusive");
  }
  StageRun run(argc, argv, global.seed);
  run.param("input", args.input);
  run.param("scheme", args.scheme);
  run.param("stopwords", args.stopwords.empty() ? "<bundled>" : args.stopwords);
  run.param("drop_empty", args.drop_empty_docs);
  run.param("binarize", args.binarize_labels);
  run.param("balance", args.balance_classes);
  run.param("split_fraction", args.split_fraction);
  run.param("kfold", args.kfold_count);
  run.param("seed", global.seed);
  run.note_input(args.input);
  if (!args.stopwords.empty()) run.note_input(args.stopwords);

  auto dataset = load_dataset(args.input, args.scheme);
  dataset = preprocess(dataset, resolve_stopwords(args.stopwords));
  if (args.drop_empty_docs) dataset = drop_empty(dataset);
  if (args.binarize_labels) dataset = binarize(dataset);
  if (args.balance_classes) dataset = balance(dataset, global.seed);

  std::string split_path = args.split_out;
  if (args.split_fraction > 0.0) {
    dataset = split(dataset, args.split_fraction, global.seed);
    if (split_path.empty()) split_path = args.out + ".split.json";
    save_split_manifest(*dataset.split, split_path);
  } else if (args.kfold_count > 0) {
    const auto folds = kfold(dataset, args.kfold_count, global.seed);
    if (split_path.empty()) split_path = args.out + ".split.json";
    save_split_manifest(folds, split_path);
  }
  save_jsonl(dataset, args.out);

  run.note_output(args.out);
  if (!split_path.empty()) run.note_output(split_path);
  run.finish(manifest_path_for(args.out));
  return 0;
}

struct TrainEmbeddingsArgs {
  std::string input, scheme = "ternary", out;
  SkipgramConfig config;
};

int cmd_train_embeddings(const TrainEmbeddingsArgs& args,
                         const GlobalOptions& global, int argc, char** argv) {
  StageRun run(argc, argv, global.seed);
  run.param("input", args.input);
  run.param("dim", args.config.dim);
  run.param("window", args.config.window);
  run.param("negative", args.config.negative_samples);
  run.param("epochs", args.config.epochs);
  run.param("learning_rate", args.config.initial_learning_rate);
  run.param("min_count", args.config.min_count);
  run.param("subsample", args.config.subsample);
  run.param("seed", global.seed);
  run.note_input(args.input);

  auto dataset = load_dataset(args.input, args.scheme);
  require_tokens(dataset, "train-embeddings");
  SkipgramConfig config = args.config;
  config.seed = global.seed;
  config.threads = global.effective_threads();
  const auto matrix = train_skipgram(token_lists(dataset), config);
  log::info("train-embeddings: vocabulary " + std::to_string(matrix.size()) +
            ", final epoch loss " + format_score(matrix.epoch_losses().back()));
  save_embeddings(matrix, args.out);

  run.note_output(args.out);
  run.finish(manifest_path_for(args.out));
  return 0;
}

struct SeedsArgs {
  std::string input, scheme = "binary_side", side2, side1, out;
  int k = 100;
  long long min_frequency = 100;
};

int cmd_seeds(const SeedsArgs& args, const GlobalOptions& global, int argc,
              char** argv) {
  StageRun run(argc, argv, global.seed);
  run.param("input", args.input);
  run.param("side2", args.side2);
  run.param("side1", args.side1.empty() ? "<rest>" : args.side1);
  run.param("k", args.k);
  run.param("min_frequency", args.min_frequency);
  run.note_input(args.input);

  auto dataset = load_dataset(args.input, args.scheme);
  require_tokens(dataset, "seeds");
  if (!is_legal_label(dataset.scheme, args.side2)) {
    throw std::runtime_error("cli: --side2-label '" + args.side2 +
                             "' is not part of scheme " + args.scheme);
  }
  std::vector<std::vector<std::string>> side1_docs, side2_docs;
  for (const auto& doc : dataset.documents) {
    if (doc.label.value == args.side2) {
      side2_docs.push_back(doc.tokens);
    } else if (args.side1.empty() || doc.label.value == args.side1) {
      side1_docs.push_back(doc.tokens);
    }
  }
  const auto shift = frequency_shift(relative_frequencies(side1_docs),
                                     relative_frequencies(side2_docs));
  auto seeds = select_seeds(shift, args.k, args.min_frequency);
  seeds.side2_name = args.side2;
  save_seeds(seeds, args.out);
  log::info("seeds: " + std::to_string(seeds.liberty.size()) + " liberty / " +
            std::to_string(seeds.oppression.size()) + " oppression seeds");

  run.note_output(args.out);
  run.finish(manifest_path_for(args.out));
  return 0;
}

struct GenWeArgs {
  std::string embeddings, seeds, out, input, scheme = "binary_side", name;
  long long min_frequency = 0;
  bool mean_normalize = false;
};

int cmd_gen_we(const GenWeArgs& args, const GlobalOptions& global, int argc,
               char** argv) {
  StageRun run(argc, argv, global.seed);
  run.param("embeddings", args.embeddings);
  run.param("seeds", args.seeds);
  run.param("min_frequency", args.min_frequency);
  run.param("mean_normalize", args.mean_normalize);
  run.note_input(args.embeddings);
  run.note_input(args.seeds);

  const auto matrix = load_embeddings(args.embeddings);
  const auto seeds = load_seeds(args.seeds);
  WeLexiconOptions options;
  options.mean_normalize = args.mean_normalize;
  FrequencyTable frequencies;
  if (args.min_frequency > 0) {
    if (args.input.empty()) {
      throw std::runtime_error(
          "cli: --min-frequency needs --input to compute corpus frequencies");
    }
    run.note_input(args.input);
    auto dataset = load_dataset(args.input, args.scheme);
    require_tokens(dataset, "gen-we");
    frequencies = relative_frequencies(token_lists(dataset));
    options.min_frequency = args.min_frequency;
    options.frequencies = &frequencies;
  }
  auto lexicon = generate_we(matrix, seeds, options);
  if (!args.name.empty()) lexicon.metadata()["source_dataset"] = args.name;
  save_lexicon(lexicon, args.out);
  log::info("gen-we: " + std::to_string(lexicon.size()) + " scored tokens");

  run.note_output(args.out);
  run.finish(manifest_path_for(args.out));
  return 0;
}

struct GenCsArgs {
  std::string dataset, scheme = "ternary", out, name;
  std::string liberty_class, oppression_class, triplets_prefix;
  long long min_freq = 10;
};

int cmd_gen_cs(const GenCsArgs& args, const GlobalOptions& global, int argc,
               char** argv) {
  StageRun run(argc, argv, global.seed);
  run.param("dataset", args.dataset);
  run.param("min_freq", args.min_freq);
  run.note_input(args.dataset);

  auto dataset = load_dataset(args.dataset, args.scheme);
  require_tokens(dataset, "gen-cs");
  const auto [liberty, oppression] = polarity_classes(
      dataset.scheme, args.liberty_class, args.oppression_class);
  run.param("liberty_class", liberty);
  run.param("oppression_class", oppression);

  const auto [wd, dm] = build_matrices(dataset, args.min_freq);
  const auto wm = normalize(compose(wd, dm));
  auto lexicon = to_lexicon(wm, liberty, oppression);
  lexicon.metadata()["min_frequency"] = std::to_string(args.min_freq);
  if (!args.name.empty()) lexicon.metadata()["source_dataset"] = args.name;
  save_lexicon(lexicon, args.out);
  log::info("gen-cs: " + std::to_string(lexicon.size()) + " scored tokens");

  run.note_output(args.out);
  if (!args.triplets_prefix.empty()) {
    const std::string wd_path = args.triplets_prefix + ".word_doc.txt";
    const std::string wm_path = args.triplets_prefix + ".word_moral.txt";
    export_word_doc_triplets(wd, wd_path);
    export_word_moral_triplets(wm, wm_path);
    run.note_output(wd_path);
    run.note_output(wm_path);
  }
  run.finish(manifest_path_for(args.out));
  return 0;
}

struct MergeArgs {
  std::vector<std::string> lexicons;
  double selection = 50.0;
  std::string rescale_mode = "none";
  std::string out;
};

int cmd_merge(const MergeArgs& args, const GlobalOptions& global, int argc,
              char** argv) {
  StageRun run(argc, argv, global.seed);
  run.param("selection", args.selection);
  run.param("rescale", args.rescale_mode);
  std::vector<Lexicon> lexicons;
  for (const auto& path : args.lexicons) {
    run.note_input(path);
    lexicons.push_back(load_lexicon(path));
  }
  const auto merged =
      overlap_merge(lexicons, args.selection, parse_rescale_mode(args.rescale_mode));
  save_lexicon(merged, args.out);
  log::info("merge: " + std::to_string(merged.size()) + " tokens at selection " +
            format_score(args.selection) + "%");

  run.note_output(args.out);
  run.finish(manifest_path_for(args.out));
  return 0;
}

struct SweepArgs {
  std::vector<std::string> lexicons;
  std::vector<std::string> train;
  std::string scheme = "binary_side";
  std::string grid = "10,20,30,40,50,60,70,80,90,100";
  std::string rescale_mode = "none";
  std::string out;
  int folds = 10;
  double lambda = 1.0;
};

int cmd_sweep(const SweepArgs& args, const GlobalOptions& global, int argc,
              char** argv) {
  StageRun run(argc, argv, global.seed);
  run.param("grid", args.grid);
  run.param("folds", args.folds);
  run.param("rescale", args.rescale_mode);
  run.param("lambda", args.lambda);
  run.param("seed", global.seed);

  std::vector<Lexicon> lexicons;
  for (const auto& path : args.lexicons) {
    run.note_input(path);
    lexicons.push_back(load_lexicon(path));
  }
  std::vector<LabeledDataset> train_sets;
  for (const auto& path : args.train) {
    run.note_input(path);
    auto ds = load_dataset(path, args.scheme);
    require_tokens(ds, "sweep");
    train_sets.push_back(std::move(ds));
  }
  std::vector<double> grid;
  std::stringstream ss(args.grid);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) grid.push_back(std::stod(item));
  }
  LogRegConfig logreg;
  logreg.lambda = args.lambda;
  const auto result =
      sweep_selection(lexicons, grid, train_sets, args.folds, global.seed,
                      parse_rescale_mode(args.rescale_mode), logreg);

  nlohmann::json obj;
  obj["best_p"] = result.best_p;
  nlohmann::json scores = nlohmann::json::object();
  for (const auto& [p, score] : result.mean_score) {
    scores[format_score(p)] = score;
  }
  obj["mean_cv_score"] = scores;
  nlohmann::json errors = nlohmann::json::object();
  for (const auto& [p, message] : result.errors) {
    errors[format_score(p)] = message;
  }
  obj["errors"] = errors;
  std::ofstream out(args.out);
  if (!out) throw std::runtime_error("cli: cannot write " + args.out);
  out << obj.dump(2) << "\n";
  out.close();
  log::info("sweep: best selection parameter " + format_score(result.best_p) + "%");

  run.note_output(args.out);
  run.finish(manifest_path_for(args.out));
  return 0;
}

struct FeaturizeArgs {
  std::string dataset, scheme = "binary_side", lexicon, mode = "docvec", out;
  int vocab_size = 1000;
};

int cmd_featurize(const FeaturizeArgs& args, const GlobalOptions& global,
                  int argc, char** argv) {
  StageRun run(argc, argv, global.seed);
  run.param("dataset", args.dataset);
  run.param("mode", args.mode);
  run.note_input(args.dataset);

  auto dataset = load_dataset(args.dataset, args.scheme);
  require_tokens(dataset, "featurize");
  std::vector<std::string> ids;
  for (const auto& doc : dataset.documents) ids.push_back(doc.id);

  std::vector<FeatureVector> rows;
  if (args.mode == "unigram") {
    run.param("vocab_size", args.vocab_size);
    std::vector<const Document*> ptrs;
    for (const auto& doc : dataset.documents) ptrs.push_back(&doc);
    const auto featurizer = UnigramFeaturizer::fit(args.vocab_size, ptrs);
    for (const auto& doc : dataset.documents) {
      rows.push_back(featurizer.apply(doc));
    }
  } else {
    if (args.lexicon.empty()) {
      throw std::runtime_error("cli: --lexicon is required for mode " + args.mode);
    }
    run.param("lexicon", args.lexicon);
    run.note_input(args.lexicon);
    const auto lexicon = load_lexicon(args.lexicon);
    rows = featurize_documents(lexicon, parse_feature_mode(args.mode),
                               dataset.documents);
  }
  export_features_csv(ids, rows, args.out);

  run.note_output(args.out);
  run.finish(manifest_path_for(args.out));
  return 0;
}

struct TrainArgs {
  std::string dataset, scheme = "binary_side", lexicon, mode = "docvec", out;
  LogRegConfig config;
};

int cmd_train(const TrainArgs& args, const GlobalOptions& global, int argc,
              char** argv) {
  StageRun run(argc, argv, global.seed);
  run.param("dataset", args.dataset);
  run.param("lexicon", args.lexicon);
  run.param("mode", args.mode);
  run.param("lambda", args.config.lambda);
  run.param("tolerance", args.config.tolerance);
  run.param("max_iterations", args.config.max_iterations);
  run.param("seed", global.seed);
  run.note_input(args.dataset);
  run.note_input(args.lexicon);

  auto dataset = load_dataset(args.dataset, args.scheme);
  require_tokens(dataset, "train");
  const auto& labels = scheme_labels(dataset.scheme);
  if (labels.size() != 2) {
    throw std::runtime_error("cli: train needs a binary scheme, got " +
                             args.scheme);
  }
  const auto lexicon = load_lexicon(args.lexicon);
  const auto rows = featurize_documents(lexicon, parse_feature_mode(args.mode),
                                        dataset.documents);
  std::vector<int> y;
  for (const auto& doc : dataset.documents) {
    y.push_back(doc.label.value == labels.front() ? 1 : 0);
  }
  LogRegConfig config = args.config;
  config.seed = global.seed;
  const auto model =
      fit_logreg(feature_matrix(rows), y, config, rows[0].schema_id);
  save_model(model, args.out);
  log::info("train: " + std::to_string(model.record().iterations) +
            " iterations, final loss " + format_score(model.record().final_loss) +
            (model.record().converged ? " (converged)" : " (iteration cap)"));

  run.note_output(args.out);
  run.finish(manifest_path_for(args.out));
  return 0;
}

struct EvaluateArgs {
  std::string config_path, out_dir;
  double alpha = -1.0;  // <0: use the config value
};

int cmd_evaluate(const EvaluateArgs& args, const GlobalOptions& global,
                 int argc, char** argv) {
  StageRun run(argc, argv, global.seed);
  run.note_input(args.config_path);

  const auto config = parse_experiment_config(args.config_path);
  const double alpha = args.alpha >= 0.0 ? args.alpha : config.alpha;
  run.param("config", args.config_path);
  run.param("alpha", alpha);

  ExperimentEnv env;
  env.logreg = config.logreg;
  env.threads = global.threads;
  for (const auto& ref : config.datasets) {
    const LabelScheme scheme = parse_scheme(ref.scheme);
    if (!ref.train_path.empty() || !ref.test_path.empty()) {
      if (ref.train_path.empty() || ref.test_path.empty()) {
        throw std::runtime_error("cli: dataset '" + ref.name +
                                 "' needs both train and test paths");
      }
      run.note_input(ref.train_path);
      run.note_input(ref.test_path);
      auto train_ds = load_jsonl(ref.train_path, scheme, ref.name);
      auto test_ds = load_jsonl(ref.test_path, scheme, ref.name);
      env.datasets.emplace(
          ref.name,
          make_data_split(ref.name, scheme, std::move(train_ds.documents),
                          std::move(test_ds.documents)));
      continue;
    }
    if (ref.file_path.empty()) {
      throw std::runtime_error("cli: dataset '" + ref.name +
                               "' needs train/test paths or a file");
    }
    run.note_input(ref.file_path);
    auto dataset = load_jsonl(ref.file_path, scheme, ref.name);
    if (ref.test_only) {
      env.datasets.emplace(ref.name, make_test_only_split(dataset));
    } else if (!ref.split_manifest.empty()) {
      run.note_input(ref.split_manifest);
      dataset.split = load_split_manifest(ref.split_manifest);
      env.datasets.emplace(ref.name, make_data_split(dataset));
    } else {
      const std::uint64_t split_seed =
          ref.split_seed != 0 ? ref.split_seed : config.seed;
      dataset = split(dataset, ref.test_fraction, split_seed);
      env.datasets.emplace(ref.name, make_data_split(dataset));
    }
  }
  for (const auto& ref : config.lexicons) {
    run.note_input(ref.path);
    auto lexicon = load_lexicon(ref.path);
    (void)lexicon.digest();  // seal before cells share it across threads
    env.lexicons.emplace(ref.name, std::move(lexicon));
  }

  const auto specs = build_specs(config);
  const auto table = run_matrix(specs, env);
  if (!table.complete()) {
    for (std::size_t m = 0; m < table.methods.size(); ++m) {
      for (std::size_t e = 0; e < table.experiments.size(); ++e) {
        if (!table.cells[m][e].f1) {
          log::error("evaluate: missing cell (" + table.methods[m] + ", " +
                     table.experiments[e] + "): " + table.cells[m][e].error);
        }
      }
    }
    throw std::runtime_error(
        "cli: evaluation matrix has missing cells; see errors above");
  }

  std::vector<std::string> written = {"results.csv", "provenance.csv",
                                      "report.txt"};
  if (table.experiments.size() >= 2 && table.methods.size() >= 2) {
    const auto ranks = friedman_rank(table.scores(), alpha);
    emit_report(table, ranks, alpha, args.out_dir);
    written.push_back("friedman.json");
    log::info("evaluate: Friedman statistic " + format_score(ranks.statistic) +
              ", p " + format_score(ranks.p_value) + " (" + ranks.p_method + ")");
  } else {
    log::warn("evaluate: fewer than two methods or experiment columns; "
              "skipping the Friedman ranking");
    emit_report(table, args.out_dir);
  }

  for (const auto& name : written) {
    run.note_output((fs::path(args.out_dir) / name).string());
  }
  run.finish((fs::path(args.out_dir) / "manifest.json").string());
  return 0;
}

struct CompareArgs {
  std::string a, b, out;
  int top = 25;
};

int cmd_compare(const CompareArgs& args, const GlobalOptions& global, int argc,
                char** argv) {
  StageRun run(argc, argv, global.seed);
  run.param("a", args.a);
  run.param("b", args.b);
  run.param("top", args.top);
  run.note_input(args.a);
  run.note_input(args.b);

  const auto lex_a = load_lexicon(args.a);
  const auto lex_b = load_lexicon(args.b);
  const auto result = compare(lex_a, lex_b);

  std::ofstream out(args.out);
  if (!out) throw std::runtime_error("cli: cannot write " + args.out);
  out << "#method=" << LexiconComparison::kMethodLabel << "\n";
  out << "#distance=" << format_score(result.distance) << "\n";
  out << "#shared_tokens=" << result.most_distant.size() << "\n";
  const std::size_t top = std::min<std::size_t>(
      result.most_distant.size(),
      args.top <= 0 ? result.most_distant.size()
                    : static_cast<std::size_t>(args.top));
  for (std::size_t i = 0; i < top; ++i) {
    out << result.most_distant[i].first << "\t"
        << format_score(result.most_distant[i].second) << "\n";
  }
  out.close();
  std::cout << "distance " << format_score(result.distance) << " over "
            << result.most_distant.size() << " shared tokens\n";

  run.note_output(args.out);
  run.finish(manifest_path_for(args.out));
  return 0;
}

struct ReportArgs {
  std::string results, out_dir;
  double alpha = 0.05;
};

int cmd_report(const ReportArgs& args, const GlobalOptions& global, int argc,
               char** argv) {
  StageRun run(argc, argv, global.seed);
  run.param("results", args.results);
  run.param("alpha", args.alpha);
  run.note_input(args.results);

  // Rebuild a table from an external results CSV; provenance is marked as
  // imported since the cells were not computed in this run.
  std::ifstream in(args.results);
  if (!in) throw std::runtime_error("cli: cannot open " + args.results);
  std::string header;
  std::getline(in, header);
  ResultsTable table;
  {
    std::stringstream ss(header);
    std::string field;
    bool first = true;
    while (std::getline(ss, field, ',')) {
      if (first) {
        first = false;
        continue;
      }
      table.experiments.push_back(field);
    }
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');
    table.methods.push_back(field);
    std::vector<CellResult> row;
    while (std::getline(ss, field, ',')) {
      CellResult cell;
      cell.f1 = std::stod(field);
      cell.config_digest = "imported";
      row.push_back(std::move(cell));
    }
    if (row.size() != table.experiments.size()) {
      throw std::runtime_error("cli: ragged results row for method '" +
                               table.methods.back() + "'");
    }
    table.cells.push_back(std::move(row));
  }

  std::vector<std::string> written = {"results.csv", "provenance.csv",
                                      "report.txt"};
  if (table.experiments.size() >= 2 && table.methods.size() >= 2) {
    const auto ranks = friedman_rank(table.scores(), args.alpha);
    emit_report(table, ranks, args.alpha, args.out_dir);
    written.push_back("friedman.json");
  } else {
    log::warn("report: fewer than two methods or experiment columns; "
              "skipping the Friedman ranking");
    emit_report(table, args.out_dir);
  }

  for (const auto& name : written) {
    run.note_output((fs::path(args.out_dir) / name).string());
  }
  run.finish((fs::path(args.out_dir) / "manifest.json").string());
  return 0;
}

const char* const kSchemeHelp = "Label scheme: ternary|binary_moral|binary_side";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moral polarity lexicon induction and evaluation toolkit"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for every randomized operation");
  app.add_option("--threads", global.threads, "Worker threads where supported");
  app.add_flag("--deterministic,!--no-deterministic", global.deterministic,
               "Deterministic mode (single-threaded training)");
  app.add_option("--log-level", global.log_level,
                 "Log threshold: debug|info|warn|error|silent");

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand(
      "ingest", "Validate a JSONL dataset and write its canonical form");
  ingest->add_option("--input", ingest_args.input, "Input JSONL file")
      ->required();
  ingest->add_option("--scheme", ingest_args.scheme, kSchemeHelp);
  ingest->add_option("--name", ingest_args.name, "Dataset name for metadata");
  ingest->add_option("--out", ingest_args.out, "Output JSONL file")->required();

  PreprocessArgs pre_args;
  auto* pre = app.add_subcommand(
      "preprocess", "Tokenize and optionally binarize/balance/split a dataset");
  pre->add_option("--input", pre_args.input, "Input JSONL file")->required();
  pre->add_option("--scheme", pre_args.scheme, kSchemeHelp);
  pre->add_option("--out", pre_args.out, "Output JSONL file")->required();
  pre->add_option("--stopwords", pre_args.stopwords,
                  "Stopword file (default: bundled English list)");
  pre->add_flag("--drop-empty", pre_args.drop_empty_docs,
                "Drop documents that end up with no tokens");
  pre->add_flag("--binarize", pre_args.binarize_labels,
                "Collapse ternary labels to Moral/Neutral");
  pre->add_flag("--balance", pre_args.balance_classes,
                "Undersample the majority class to the minority count");
  pre->add_option("--split-fraction", pre_args.split_fraction,
                  "Hold out this fraction as a stratified test split");
  pre->add_option("--kfold", pre_args.kfold_count,
                  "Assign stratified folds instead of a train/test split");
  pre->add_option("--split-out", pre_args.split_out,
                  "Split manifest path (default: <out>.split.json)");

  TrainEmbeddingsArgs emb_args;
  auto* emb = app.add_subcommand("train-embeddings",
                                 "Train skip-gram word embeddings");
  emb->add_option("--input", emb_args.input, "Preprocessed JSONL file")
      ->required();
  emb->add_option("--scheme", emb_args.scheme, kSchemeHelp);
  emb->add_option("--out", emb_args.out, "Output vector file")->required();
  emb->add_option("--dim", emb_args.config.dim, "Vector dimension");
  emb->add_option("--window", emb_args.config.window, "Context window size");
  emb->add_option("--negative", emb_args.config.negative_samples,
                  "Negative samples per context pair");
  emb->add_option("--epochs", emb_args.config.epochs, "Training epochs");
  emb->add_option("--learning-rate", emb_args.config.initial_learning_rate,
                  "Initial learning rate (linear decay)");
  emb->add_option("--min-count", emb_args.config.min_count,
                  "Minimum token frequency for the vocabulary");
  emb->add_flag("--subsample", emb_args.config.subsample,
                "Subsample frequent words");

  SeedsArgs seeds_args;
  auto* seeds_cmd = app.add_subcommand(
      "seeds", "Select data-driven seed words from frequency shifts");
  seeds_cmd->add_option("--input", seeds_args.input, "Preprocessed JSONL file")
      ->required();
  seeds_cmd->add_option("--scheme", seeds_args.scheme, kSchemeHelp);
  seeds_cmd
      ->add_option("--side2-label", seeds_args.side2,
                   "Label of the liberty-positive side")
      ->required();
  seeds_cmd->add_option("--side1-label", seeds_args.side1,
                        "Label of the opposite side (default: all others)");
  seeds_cmd->add_option("--k", seeds_args.k, "Seeds per side");
  seeds_cmd->add_option("--min-frequency", seeds_args.min_frequency,
                        "Minimum combined raw frequency");
  seeds_cmd->add_option("--out", seeds_args.out, "Output seeds JSON")
      ->required();

  GenWeArgs we_args;
  auto* gen_we = app.add_subcommand(
      "gen-we", "Generate a lexicon from embedding similarity to seed words");
  gen_we->add_option("--embeddings", we_args.embeddings, "Vector file")
      ->required();
  gen_we->add_option("--seeds", we_args.seeds, "Seeds JSON file")->required();
  gen_we->add_option("--out", we_args.out, "Output lexicon TSV")->required();
  gen_we->add_option("--min-frequency", we_args.min_frequency,
                     "Score only tokens at least this frequent (0 = all)");
  gen_we->add_option("--input", we_args.input,
                     "Preprocessed JSONL for the frequency filter");
  gen_we->add_option("--scheme", we_args.scheme, kSchemeHelp);
  gen_we->add_flag("--mean-normalize", we_args.mean_normalize,
                   "Divide each seed-set sum by the set size");
  gen_we->add_option("--name", we_args.name, "Source dataset name for metadata");

  GenCsArgs cs_args;
  auto* gen_cs = app.add_subcommand(
      "gen-cs", "Generate a lexicon by compositional label projection");
  gen_cs->add_option("--dataset", cs_args.dataset, "Preprocessed JSONL file")
      ->required();
  gen_cs->add_option("--scheme", cs_args.scheme, kSchemeHelp);
  gen_cs->add_option("--min-freq", cs_args.min_freq, "Frequency cut-off");
  gen_cs->add_option("--liberty-class", cs_args.liberty_class,
                     "Class treated as liberty (default: first of scheme)");
  gen_cs->add_option("--oppression-class", cs_args.oppression_class,
                     "Class treated as oppression (default: last of scheme)");
  gen_cs->add_option("--out", cs_args.out, "Output lexicon TSV")->required();
  gen_cs->add_option("--export-triplets", cs_args.triplets_prefix,
                     "Also dump sparse matrices under this path prefix");
  gen_cs->add_option("--name", cs_args.name, "Source dataset name for metadata");

  MergeArgs merge_args;
  auto* merge = app.add_subcommand(
      "merge", "Merge lexicons into an overlap lexicon");
  merge
      ->add_option("--lexicons", merge_args.lexicons,
                   "Constituent lexicon TSV files")
      ->required()
      ->expected(-2);
  merge->add_option("--selection", merge_args.selection,
                    "Selection parameter in percent (0, 100]");
  merge->add_option("--rescale", merge_args.rescale_mode,
                    "Rescale constituents first: none|minmax_symmetric|zscore");
  merge->add_option("--out", merge_args.out, "Output lexicon TSV")->required();

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand(
      "sweep", "Cross-validate the overlap selection parameter over a grid");
  sweep
      ->add_option("--lexicons", sweep_args.lexicons,
                   "Constituent lexicon TSV files")
      ->required()
      ->expected(-2);
  sweep->add_option("--train", sweep_args.train, "Training JSONL datasets")
      ->required()
      ->expected(-1);
  sweep->add_option("--scheme", sweep_args.scheme, kSchemeHelp);
  sweep->add_option("--grid", sweep_args.grid,
                    "Comma-separated selection percentages");
  sweep->add_option("--folds", sweep_args.folds, "Cross-validation folds");
  sweep->add_option("--rescale", sweep_args.rescale_mode,
                    "Rescale constituents first: none|minmax_symmetric|zscore");
  sweep->add_option("--lambda", sweep_args.lambda, "L2 strength");
  sweep->add_option("--out", sweep_args.out, "Output JSON")->required();

  FeaturizeArgs feat_args;
  auto* feat = app.add_subcommand(
      "featurize", "Write document feature vectors as CSV");
  feat->add_option("--dataset", feat_args.dataset, "Preprocessed JSONL file")
      ->required();
  feat->add_option("--scheme", feat_args.scheme, kSchemeHelp);
  feat->add_option("--lexicon", feat_args.lexicon, "Lexicon TSV file");
  feat->add_option("--mode", feat_args.mode,
                   "Featurizer: docvec|stats|extended|unigram");
  feat->add_option("--vocab-size", feat_args.vocab_size,
                   "Vocabulary size for unigram mode");
  feat->add_option("--out", feat_args.out, "Output CSV")->required();

  TrainArgs train_args;
  auto* train = app.add_subcommand(
      "train", "Fit the logistic-regression classifier on lexicon features");
  train->add_option("--dataset", train_args.dataset, "Training JSONL file")
      ->required();
  train->add_option("--scheme", train_args.scheme, kSchemeHelp);
  train->add_option("--lexicon", train_args.lexicon, "Lexicon TSV file")
      ->required();
  train->add_option("--mode", train_args.mode,
                    "Featurizer: docvec|stats|extended");
  train->add_option("--lambda", train_args.config.lambda, "L2 strength");
  train->add_option("--tolerance", train_args.config.tolerance,
                    "Gradient max-norm stopping tolerance");
  train->add_option("--max-iterations", train_args.config.max_iterations,
                    "Iteration cap");
  train->add_option("--out", train_args.out, "Output model JSON")->required();

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Run a declared experiment matrix and rank the methods");
  evaluate->add_option("--config", eval_args.config_path,
                       "Experiment configuration file")
      ->required();
  evaluate->add_option("--out", eval_args.out_dir, "Output directory")
      ->required();
  evaluate->add_option("--alpha", eval_args.alpha,
                       "Significance level (default: config value)");

  CompareArgs cmp_args;
  auto* compare_cmd = app.add_subcommand(
      "compare", "Compare two lexicons after symmetric rescaling");
  compare_cmd->add_option("--a", cmp_args.a, "First lexicon TSV")->required();
  compare_cmd->add_option("--b", cmp_args.b, "Second lexicon TSV")->required();
  compare_cmd->add_option("--top", cmp_args.top,
                          "Most-distant tokens to keep (0 = all)");
  compare_cmd->add_option("--out", cmp_args.out, "Output report TSV")
      ->required();

  ReportArgs report_args;
  auto* report = app.add_subcommand(
      "report", "Render a results CSV as a ranked report");
  report->add_option("--results", report_args.results, "results.csv file")
      ->required();
  report->add_option("--alpha", report_args.alpha, "Significance level");
  report->add_option("--out", report_args.out_dir, "Output directory")
      ->required();

  CLI11_PARSE(app, argc, argv);
  log::set_level(log::parse_level(global.log_level));

  try {
    if (ingest->parsed()) return cmd_ingest(ingest_args, global, argc, argv);
    if (pre->parsed()) return cmd_preprocess(pre_args, global, argc, argv);
    if (emb->parsed()) {
      return cmd_train_embeddings(emb_args, global, argc, argv);
    }
    if (seeds_cmd->parsed()) return cmd_seeds(seeds_args, global, argc, argv);
    if (gen_we->parsed()) return cmd_gen_we(we_args, global, argc, argv);
    if (gen_cs->parsed()) return cmd_gen_cs(cs_args, global, argc, argv);
    if (merge->parsed()) return cmd_merge(merge_args, global, argc, argv);
    if (sweep->parsed()) return cmd_sweep(sweep_args, global, argc, argv);
    if (feat->parsed()) return cmd_featurize(feat_args, global, argc, argv);
    if (train->parsed()) return cmd_train(train_args, global, argc, argv);
    if (evaluate->parsed()) return cmd_evaluate(eval_args, global, argc, argv);
    if (compare_cmd->parsed()) return cmd_compare(cmp_args, global, argc, argv);
    if (report->parsed()) return cmd_report(report_args, global, argc, argv);
  } catch (const std::exception& e) {
    // Library errors carry their module name as a prefix.
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
