#ifndef MORALLEX_EXPERIMENTS_HPP
#define MORALLEX_EXPERIMENTS_HPP

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "morallex/corpus.hpp"
#include "morallex/featurize.hpp"
#include "morallex/friedman.hpp"
#include "morallex/lexicon.hpp"
#include "morallex/logreg.hpp"

namespace morallex {

enum class FeaturizerKind { LexiconVector, Unigram, Combined };
enum class LexiconFeatureMode { DocVector, Stats, Extended };

struct ExperimentSpec {
  std::string method_id;  // row descriptor in the results table
  FeaturizerKind kind = FeaturizerKind::LexiconVector;
  std::vector<std::string> lexicon_ids;  // one for LexiconVector, >= 1 combined
  LexiconFeatureMode mode = LexiconFeatureMode::DocVector;
  int unigram_size = 0;
  int svd_k = 50;
  bool append_stats = false;  // Combined: add per-lexicon summary blocks
  std::string train_dataset;
  std::string test_dataset;
  std::uint64_t seed = 0;
};

// Resolved train/test documents of one dataset id. Test-only datasets keep
// an empty train side. Digests are over the sorted id sets and feed the
// lineage checks.
struct DataSplit {
  std::string name;
  LabelScheme scheme{LabelScheme::BinaryMoral};
  std::vector<Document> train;
  std::vector<Document> test;
  std::string train_digest;
  std::string test_digest;
};

DataSplit make_data_split(const std::string& name, LabelScheme scheme,
                          std::vector<Document> train,
                          std::vector<Document> test);
// From a dataset carrying a train/test split assignment.
DataSplit make_data_split(const LabeledDataset& dataset);
// Test-only: every document lands on the test side.
DataSplit make_test_only_split(const LabeledDataset& dataset);

struct ExperimentEnv {
  std::map<std::string, DataSplit> datasets;
  std::map<std::string, Lexicon> lexicons;
  LogRegConfig logreg;
  int threads = 1;

  // Fitted reducers shared across cells of one training split. Entries are
  // lineage-checked against the cell's train digest before use.
  mutable std::map<std::string, SvdReducer> reducer_cache;
  mutable std::mutex cache_mutex;
};

std::string reducer_cache_key(const std::string& train_digest,
                              const std::string& lexicon_digest, int k,
                              std::uint64_t seed);

struct CellResult {
  std::optional<double> f1;  // empty = failed cell
  std::string error;
  std::uint64_t seed = 0;
  std::string config_digest;
};

struct ResultsTable {
  std::vector<std::string> methods;      // rows
  std::vector<std::string> experiments;  // columns, "train->test"
  std::vector<std::vector<CellResult>> cells;  // [method][experiment]

  bool complete() const;
  // Throws when any cell is missing.
  std::vector<std::vector<double>> scores() const;
};

// One cell per spec; failures are recorded, not thrown, and the rest of
// the matrix still runs. Cells are independent jobs; env.threads > 1 runs
// them concurrently with a deterministic ordered merge.
ResultsTable run_matrix(const std::vector<ExperimentSpec>& specs,
                        const ExperimentEnv& env);

CellResult run_cell(const ExperimentSpec& spec, const ExperimentEnv& env);

struct SweepResult {
  double best_p = 0.0;
  // selection percentage -> mean CV F1 (averaged over per-dataset means);
  // grid points where every dataset failed are absent here and explained
  // in `errors`.
  std::map<double, double> mean_score;
  std::map<double, std::string> errors;
};

// For each selection percentage: build the overlap lexicon and score it by
// stratified k-fold cross-validation on every train set. Every grid point
// is evaluated; best_p is the argmax with ties going to the smaller p.
SweepResult sweep_selection(const std::vector<Lexicon>& lexicons,
                            const std::vector<double>& grid,
                            const std::vector<LabeledDataset>& train_sets,
                            int folds, std::uint64_t seed,
                            RescaleMode merge_rescale = RescaleMode::None,
                            const LogRegConfig& logreg = {});

// results.csv + provenance.csv + report.txt + friedman.json under out_dir.
// Requires a complete table; byte-deterministic given inputs.
void emit_report(const ResultsTable& table, const FriedmanResult& ranks,
                 double alpha, const std::string& out_dir);

// Rank-free variant for matrices with a single experiment column, where
// the Friedman test is undefined. Writes results.csv, provenance.csv and a
// rank-less report.txt.
void emit_report(const ResultsTable& table, const std::string& out_dir);

// Parse back the scores written by emit_report (round-trip checks).
std::vector<std::vector<double>> parse_results_csv(const std::string& path);

// --- Declarative experiment configuration (INI-style) ----------------------

struct ExperimentConfig {
  std::uint64_t seed = 42;
  double alpha = 0.05;
  LogRegConfig logreg;
  int svd_k = 50;

  struct DatasetRef {
    std::string name;
    std::string scheme = "binary_moral";
    std::string train_path;  // preprocessed JSONL
    std::string test_path;
    std::string file_path;   // alternative: one file plus a split
    std::string split_manifest;
    double test_fraction = 0.2;
    std::uint64_t split_seed = 0;
    bool test_only = false;
  };
  struct LexiconRef {
    std::string name;
    std::string path;
  };
  struct MethodRef {
    std::string name;
    std::string kind;  // "lexicon" | "unigram" | "combined"
    std::vector<std::string> lexicons;
    std::string features = "docvec";  // lexicon kind: docvec|stats|extended
    int vocab_size = 1000;
    int k = 0;  // 0 = use the run-level svd_k
    bool append_stats = false;
  };
  struct BlockRef {
    std::string name;
    std::string train;
    std::string test;
  };

  std::vector<DatasetRef> datasets;
  std::vector<LexiconRef> lexicons;
  std::vector<MethodRef> methods;
  std::vector<BlockRef> blocks;
};

ExperimentConfig parse_experiment_config(const std::string& path);

// Cross product methods x blocks in declaration order.
std::vector<ExperimentSpec> build_specs(const ExperimentConfig& config);

}  // namespace morallex

#endif
