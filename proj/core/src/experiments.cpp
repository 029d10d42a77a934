#include "morallex/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "morallex/util/digest.hpp"
#include "morallex/util/log.hpp"
#include "morallex/util/text.hpp"

namespace morallex {

using nlohmann::json;

namespace {

std::vector<const Document*> pointers(const std::vector<Document>& docs) {
  std::vector<const Document*> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(&d);
  return out;
}

// Class at index 0 of the scheme's label list is the positive class.
int label_to_binary(const LabelValue& label) {
  const auto& labels = scheme_labels(label.scheme);
  if (labels.size() != 2) {
    throw std::invalid_argument("experiments: scheme " +
                                scheme_name(label.scheme) + " is not binary");
  }
  return label.value == labels[0] ? 1 : 0;
}

std::vector<int> binary_labels(const std::vector<Document>& docs) {
  std::vector<int> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(label_to_binary(d.label));
  return out;
}

}  // namespace

DataSplit make_data_split(const std::string& name, LabelScheme scheme,
                          std::vector<Document> train,
                          std::vector<Document> test) {
  DataSplit split;
  split.name = name;
  split.scheme = scheme;
  split.train = std::move(train);
  split.test = std::move(test);
  std::set<std::string> train_ids;
  for (const auto& d : split.train) train_ids.insert(d.id);
  for (const auto& d : split.test) {
    if (train_ids.count(d.id)) {
      throw std::invalid_argument("experiments: document '" + d.id +
                                  "' appears on both sides of split '" + name +
                                  "'");
    }
  }
  split.train_digest = split_digest(split.train);
  split.test_digest = split_digest(split.test);
  return split;
}

DataSplit make_data_split(const LabeledDataset& dataset) {
  std::vector<Document> train, test;
  for (const Document* d : dataset.train_documents()) train.push_back(*d);
  for (const Document* d : dataset.test_documents()) test.push_back(*d);
  return make_data_split(dataset.name, dataset.scheme, std::move(train),
                         std::move(test));
}

DataSplit make_test_only_split(const LabeledDataset& dataset) {
  return make_data_split(dataset.name, dataset.scheme, {}, dataset.documents);
}

std::string reducer_cache_key(const std::string& train_digest,
                              const std::string& lexicon_digest, int k,
                              std::uint64_t seed) {
  return train_digest + "|" + lexicon_digest + "|k" + std::to_string(k) +
         "|s" + std::to_string(seed);
}

bool ResultsTable::complete() const {
  for (const auto& row : cells) {
    for (const auto& cell : row) {
      if (!cell.f1) return false;
    }
  }
  return !cells.empty();
}

std::vector<std::vector<double>> ResultsTable::scores() const {
  std::vector<std::vector<double>> out;
  out.reserve(cells.size());
  for (std::size_t m = 0; m < cells.size(); ++m) {
    std::vector<double> row;
    row.reserve(cells[m].size());
    for (std::size_t e = 0; e < cells[m].size(); ++e) {
      if (!cells[m][e].f1) {
        throw std::runtime_error("experiments: missing cell (" + methods[m] +
                                 ", " + experiments[e] +
                                 "): " + cells[m][e].error);
      }
      row.push_back(*cells[m][e].f1);
    }
    out.push_back(std::move(row));
  }
  return out;
}

namespace {

struct CellFeatures {
  std::vector<FeatureVector> train_rows;
  std::vector<FeatureVector> test_rows;
};

void verify_lineage(const std::string& artifact_digest, const DataSplit& split,
                    const std::string& what) {
  if (artifact_digest != split.train_digest) {
    throw std::runtime_error(
        "experiments: lineage violation: " + what +
        " was fitted on a document set other than the training split of '" +
        split.name + "'");
  }
}

CellFeatures build_features(const ExperimentSpec& spec,
                            const ExperimentEnv& env, const DataSplit& train,
                            const DataSplit& test) {
  CellFeatures out;
  const auto lexicon_of = [&](const std::string& id) -> const Lexicon& {
    auto it = env.lexicons.find(id);
    if (it == env.lexicons.end()) {
      throw std::runtime_error("experiments: unknown lexicon '" + id + "'");
    }
    return it->second;
  };

  switch (spec.kind) {
    case FeaturizerKind::LexiconVector: {
      if (spec.lexicon_ids.size() != 1) {
        throw std::invalid_argument(
            "experiments: lexicon featurizer takes exactly one lexicon");
      }
      const Lexicon& lex = lexicon_of(spec.lexicon_ids[0]);
      const auto featurize_one = [&](const Document& doc) {
        switch (spec.mode) {
          case LexiconFeatureMode::DocVector: return doc_vector(lex, doc);
          case LexiconFeatureMode::Stats: return stat_summary(lex, doc);
          case LexiconFeatureMode::Extended: return extended_vector(lex, doc);
        }
        return doc_vector(lex, doc);
      };
      for (const auto& d : train.train) out.train_rows.push_back(featurize_one(d));
      for (const auto& d : test.test) out.test_rows.push_back(featurize_one(d));
      return out;
    }
    case FeaturizerKind::Unigram: {
      const auto train_ptrs = pointers(train.train);
      const UnigramFeaturizer featurizer =
          UnigramFeaturizer::fit(spec.unigram_size, train_ptrs);
      verify_lineage(featurizer.fit_digest(), train, "unigram featurizer");
      for (const auto& d : train.train) out.train_rows.push_back(featurizer.apply(d));
      for (const auto& d : test.test) out.test_rows.push_back(featurizer.apply(d));
      return out;
    }
    case FeaturizerKind::Combined: {
      if (spec.lexicon_ids.empty()) {
        throw std::invalid_argument(
            "experiments: combined featurizer needs at least one lexicon");
      }
      std::vector<const Lexicon*> lexicons;
      std::vector<const SvdReducer*> reducers;
      for (const auto& id : spec.lexicon_ids) {
        const Lexicon& lex = lexicon_of(id);
        const std::string key = reducer_cache_key(
            train.train_digest, lex.short_id(), spec.svd_k, spec.seed);
        {
          std::lock_guard<std::mutex> lock(env.cache_mutex);
          auto it = env.reducer_cache.find(key);
          if (it == env.reducer_cache.end()) {
            std::vector<FeatureVector> rows;
            rows.reserve(train.train.size());
            for (const auto& d : train.train) rows.push_back(doc_vector(lex, d));
            if (rows.empty()) {
              throw std::runtime_error(
                  "experiments: training split of '" + train.name +
                  "' is empty; cannot fit a reducer");
            }
            const Eigen::MatrixXd matrix = feature_matrix(rows);
            it = env.reducer_cache
                     .emplace(key, SvdReducer::fit(matrix, spec.svd_k, spec.seed,
                                                   rows[0].schema_id,
                                                   train.train_digest))
                     .first;
          }
          verify_lineage(it->second.fit_digest(), train,
                         "SVD reducer for lexicon '" + id + "'");
          lexicons.push_back(&lex);
          reducers.push_back(&it->second);
        }
      }
      const auto featurize_one = [&](const Document& doc) {
        FeatureVector fv = combined_features(lexicons, reducers, doc);
        if (spec.append_stats) {
          for (const Lexicon* lex : lexicons) {
            const FeatureVector stats = stat_summary(*lex, doc);
            fv.values.insert(fv.values.end(), stats.values.begin(),
                             stats.values.end());
          }
          fv.schema_id += "+stats";
        }
        return fv;
      };
      for (const auto& d : train.train) out.train_rows.push_back(featurize_one(d));
      for (const auto& d : test.test) out.test_rows.push_back(featurize_one(d));
      return out;
    }
  }
  throw std::logic_error("experiments: unreachable featurizer kind");
}

}  // namespace

CellResult run_cell(const ExperimentSpec& spec, const ExperimentEnv& env) {
  CellResult result;
  result.seed = spec.seed;
  result.config_digest = short_digest(
      spec.method_id + "|" + spec.train_dataset + "|" + spec.test_dataset +
      "|" + std::to_string(spec.seed) + "|" + format_score(env.logreg.lambda));
  try {
    auto train_it = env.datasets.find(spec.train_dataset);
    if (train_it == env.datasets.end()) {
      throw std::runtime_error("experiments: unknown dataset '" +
                               spec.train_dataset + "'");
    }
    auto test_it = env.datasets.find(spec.test_dataset);
    if (test_it == env.datasets.end()) {
      throw std::runtime_error("experiments: unknown dataset '" +
                               spec.test_dataset + "'");
    }
    const DataSplit& train = train_it->second;
    const DataSplit& test = test_it->second;
    if (train.scheme != test.scheme) {
      throw std::runtime_error(
          "experiments: train/test schemes differ (" + scheme_name(train.scheme) +
          " vs " + scheme_name(test.scheme) + ")");
    }
    if (train.train.empty()) {
      throw std::runtime_error("experiments: dataset '" + train.name +
                               "' has no training documents");
    }
    if (test.test.empty()) {
      throw std::runtime_error("experiments: dataset '" + test.name +
                               "' has no test documents");
    }

    CellFeatures features = build_features(spec, env, train, test);
    const Eigen::MatrixXd x_train = feature_matrix(features.train_rows);
    const Eigen::MatrixXd x_test = feature_matrix(features.test_rows);
    if (features.train_rows[0].schema_id != features.test_rows[0].schema_id) {
      throw std::runtime_error("experiments: train/test schema mismatch");
    }

    LogRegConfig logreg = env.logreg;
    logreg.seed = spec.seed;
    const LogRegModel model =
        fit_logreg(x_train, binary_labels(train.train), logreg,
                   features.train_rows[0].schema_id);
    const std::vector<int> predicted =
        predict(model, x_test, features.test_rows[0].schema_id);
    const std::vector<int> truth = binary_labels(test.test);
    result.f1 = f1_macro(truth, predicted);
  } catch (const std::exception& e) {
    result.f1.reset();
    result.error = e.what();
    log::warn("experiments: cell (" + spec.method_id + ", " +
              spec.train_dataset + "->" + spec.test_dataset +
              ") failed: " + result.error);
  }
  return result;
}

ResultsTable run_matrix(const std::vector<ExperimentSpec>& specs,
                        const ExperimentEnv& env) {
  ResultsTable table;
  std::map<std::string, std::size_t> method_index;
  std::map<std::string, std::size_t> experiment_index;
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  slots.reserve(specs.size());
  for (const auto& spec : specs) {
    const std::string exp_id = spec.train_dataset + "->" + spec.test_dataset;
    auto [mit, m_new] = method_index.emplace(spec.method_id, table.methods.size());
    if (m_new) table.methods.push_back(spec.method_id);
    auto [eit, e_new] = experiment_index.emplace(exp_id, table.experiments.size());
    if (e_new) table.experiments.push_back(exp_id);
    slots.emplace_back(mit->second, eit->second);
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& slot : slots) {
    if (!seen.insert(slot).second) {
      throw std::invalid_argument(
          "experiments: duplicate spec for one (method, experiment) cell");
    }
  }

  table.cells.assign(table.methods.size(),
                     std::vector<CellResult>(table.experiments.size()));
  for (auto& row : table.cells) {
    for (auto& cell : row) cell.error = "no spec scheduled for this cell";
  }

  std::vector<CellResult> results(specs.size());
  const int threads = std::max(1, env.threads);
  if (threads == 1 || specs.size() <= 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      results[i] = run_cell(specs[i], env);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int worker_count =
        std::min<int>(threads, static_cast<int>(specs.size()));
    for (int t = 0; t < worker_count; ++t) {
      workers.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= specs.size()) break;
          results[i] = run_cell(specs[i], env);
        }
      });
    }
    for (auto& w : workers) w.join();
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    table.cells[slots[i].first][slots[i].second] = std::move(results[i]);
  }
  return table;
}

SweepResult sweep_selection(const std::vector<Lexicon>& lexicons,
                            const std::vector<double>& grid,
                            const std::vector<LabeledDataset>& train_sets,
                            int folds, std::uint64_t seed,
                            RescaleMode merge_rescale,
                            const LogRegConfig& logreg) {
  if (grid.empty()) {
    throw std::invalid_argument("experiments: sweep grid must be nonempty");
  }
  if (folds < 2) {
    throw std::invalid_argument("experiments: sweep needs k >= 2 folds");
  }
  if (train_sets.empty()) {
    throw std::invalid_argument("experiments: sweep needs train sets");
  }

  SweepResult result;
  for (double p : grid) {
    Lexicon merged;
    try {
      merged = overlap_merge(lexicons, p, merge_rescale);
    } catch (const std::exception& e) {
      result.errors[p] = e.what();
      continue;
    }
    if (merged.empty()) {
      result.errors[p] = "empty overlap vocabulary";
      continue;
    }

    std::vector<double> dataset_means;
    std::vector<std::string> failures;
    for (const auto& dataset : train_sets) {
      try {
        LabeledDataset with_folds = dataset;
        with_folds.split = kfold(dataset, folds, seed);
        double sum = 0.0;
        for (int f = 0; f < folds; ++f) {
          std::vector<Document> fold_train, fold_test;
          for (const Document* d : with_folds.fold_documents(f, false)) {
            fold_train.push_back(*d);
          }
          for (const Document* d : with_folds.fold_documents(f, true)) {
            fold_test.push_back(*d);
          }
          std::vector<FeatureVector> train_rows, test_rows;
          for (const auto& d : fold_train) train_rows.push_back(doc_vector(merged, d));
          for (const auto& d : fold_test) test_rows.push_back(doc_vector(merged, d));
          LogRegConfig cfg = logreg;
          cfg.seed = seed;
          const LogRegModel model =
              fit_logreg(feature_matrix(train_rows), binary_labels(fold_train),
                         cfg, train_rows[0].schema_id);
          const auto predicted = predict(model, feature_matrix(test_rows),
                                         test_rows[0].schema_id);
          sum += f1_macro(binary_labels(fold_test), predicted);
        }
        dataset_means.push_back(sum / static_cast<double>(folds));
      } catch (const std::exception& e) {
        failures.push_back(dataset.name + ": " + e.what());
      }
    }
    if (dataset_means.empty()) {
      result.errors[p] = join(failures, "; ");
      continue;
    }
    if (!failures.empty()) {
      log::warn("experiments: sweep p=" + format_score(p) + " skipped " +
                std::to_string(failures.size()) + " dataset(s): " +
                join(failures, "; "));
    }
    double mean = 0.0;
    for (double v : dataset_means) mean += v;
    result.mean_score[p] = mean / static_cast<double>(dataset_means.size());
  }

  if (result.mean_score.empty()) {
    throw std::runtime_error("experiments: every sweep grid point failed");
  }
  double best_p = result.mean_score.begin()->first;
  double best_score = result.mean_score.begin()->second;
  for (const auto& [p, score] : result.mean_score) {
    if (score > best_score) {  // strict: ties keep the smaller p
      best_score = score;
      best_p = p;
    }
  }
  result.best_p = best_p;
  return result;
}

namespace {

void check_csv_safe(const std::string& value) {
  if (value.find(',') != std::string::npos ||
      value.find('\n') != std::string::npos) {
    throw std::invalid_argument("experiments: descriptor '" + value +
                                "' is not CSV-safe");
  }
}

}  // namespace

namespace {

void check_report_table(const ResultsTable& table) {
  if (!table.complete()) {
    throw std::invalid_argument(
        "experiments: cannot emit a report from an incomplete results table");
  }
  for (const auto& m : table.methods) check_csv_safe(m);
  for (const auto& e : table.experiments) check_csv_safe(e);
}

void write_results_csv(const ResultsTable& table,
                       const std::vector<std::vector<double>>& scores,
                       const std::filesystem::path& dir) {
  std::ofstream out(dir / "results.csv");
  if (!out) throw std::runtime_error("experiments: cannot write results.csv");
  out << "method";
  for (const auto& e : table.experiments) out << "," << e;
  out << "\n";
  for (std::size_t m = 0; m < table.methods.size(); ++m) {
    out << table.methods[m];
    for (std::size_t e = 0; e < table.experiments.size(); ++e) {
      out << "," << format_double_exact(scores[m][e]);
    }
    out << "\n";
  }
}

void write_provenance_csv(const ResultsTable& table,
                          const std::filesystem::path& dir) {
  std::ofstream out(dir / "provenance.csv");
  if (!out) throw std::runtime_error("experiments: cannot write provenance.csv");
  out << "method,experiment,seed,config_digest\n";
  for (std::size_t m = 0; m < table.methods.size(); ++m) {
    for (std::size_t e = 0; e < table.experiments.size(); ++e) {
      const auto& cell = table.cells[m][e];
      out << table.methods[m] << "," << table.experiments[e] << ","
          << cell.seed << "," << cell.config_digest << "\n";
    }
  }
}

}  // namespace

void emit_report(const ResultsTable& table, const FriedmanResult& ranks,
                 double alpha, const std::string& out_dir) {
  check_report_table(table);
  if (ranks.average_ranks.size() != table.methods.size()) {
    throw std::invalid_argument(
        "experiments: rank vector does not match the table's method count");
  }

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto scores = table.scores();
  write_results_csv(table, scores, out_dir);
  write_provenance_csv(table, out_dir);
  {
    json obj;
    obj["alpha"] = alpha;
    obj["statistic"] = ranks.statistic;
    obj["p_value"] = ranks.p_value;
    obj["p_method"] = ranks.p_method;
    obj["reject_null"] = ranks.reject_null;
    json avg;
    for (std::size_t m = 0; m < table.methods.size(); ++m) {
      avg[table.methods[m]] = ranks.average_ranks[m];
    }
    obj["average_ranks"] = avg;
    std::ofstream out(fs::path(out_dir) / "friedman.json");
    if (!out) throw std::runtime_error("experiments: cannot write friedman.json");
    out << obj.dump(2) << "\n";
  }
  {
    std::ofstream out(fs::path(out_dir) / "report.txt");
    if (!out) throw std::runtime_error("experiments: cannot write report.txt");
    std::size_t width = 8;
    for (const auto& m : table.methods) width = std::max(width, m.size());

    // Methods ordered by average rank, best first; stable on name for ties.
    std::vector<std::size_t> order(table.methods.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (ranks.average_ranks[a] != ranks.average_ranks[b]) {
        return ranks.average_ranks[a] < ranks.average_ranks[b];
      }
      return table.methods[a] < table.methods[b];
    });

    int col = 10;
    for (const auto& e : table.experiments) {
      col = std::max(col, static_cast<int>(e.size()) + 2);
    }
    char buf[80];
    out << std::string(width, ' ') << "  ";
    for (const auto& e : table.experiments) {
      std::snprintf(buf, sizeof(buf), "%*s", col, e.c_str());
      out << buf;
    }
    out << "      avg_rank\n";
    for (std::size_t m : order) {
      out << table.methods[m]
          << std::string(width - table.methods[m].size(), ' ') << "  ";
      for (std::size_t e = 0; e < table.experiments.size(); ++e) {
        std::snprintf(buf, sizeof(buf), "%*.2f", col, 100.0 * scores[m][e]);
        out << buf;
      }
      std::snprintf(buf, sizeof(buf), "%14.2f", ranks.average_ranks[m]);
      out << buf << "\n";
    }
    std::snprintf(buf, sizeof(buf), "%.6g", ranks.statistic);
    out << "\nFriedman chi-square = " << buf;
    std::snprintf(buf, sizeof(buf), "%.6g", ranks.p_value);
    out << ", p = " << buf << " (" << ranks.p_method << "), alpha = ";
    std::snprintf(buf, sizeof(buf), "%g", alpha);
    out << buf << " -> " << (ranks.reject_null ? "reject H0" : "keep H0")
        << "\nScores are F1-macro x 100; lower rank is better.\n";
  }
}

void emit_report(const ResultsTable& table, const std::string& out_dir) {
  check_report_table(table);
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto scores = table.scores();
  write_results_csv(table, scores, out_dir);
  write_provenance_csv(table, out_dir);

  std::ofstream out(fs::path(out_dir) / "report.txt");
  if (!out) throw std::runtime_error("experiments: cannot write report.txt");
  std::size_t width = 8;
  for (const auto& m : table.methods) width = std::max(width, m.size());
  int col = 10;
  for (const auto& e : table.experiments) {
    col = std::max(col, static_cast<int>(e.size()) + 2);
  }
  char buf[80];
  out << std::string(width, ' ') << "  ";
  for (const auto& e : table.experiments) {
    std::snprintf(buf, sizeof(buf), "%*s", col, e.c_str());
    out << buf;
  }
  out << "\n";
  for (std::size_t m = 0; m < table.methods.size(); ++m) {
    out << table.methods[m] << std::string(width - table.methods[m].size(), ' ')
        << "  ";
    for (std::size_t e = 0; e < table.experiments.size(); ++e) {
      std::snprintf(buf, sizeof(buf), "%*.2f", col, 100.0 * scores[m][e]);
      out << buf;
    }
    out << "\n";
  }
  out << "\nScores are F1-macro x 100. Friedman ranking needs at least two "
         "experiment columns.\n";
}

std::vector<std::vector<double>> parse_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("experiments: cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("experiments: empty results file: " + path);
  }
  std::vector<std::vector<double>> scores;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    bool first = true;
    while (std::getline(ss, field, ',')) {
      if (first) {
        first = false;
        continue;
      }
      row.push_back(std::stod(field));
    }
    scores.push_back(std::move(row));
  }
  return scores;
}

// --- configuration ----------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw std::runtime_error("experiments: config key '" + key +
                           "' expects a boolean, got '" + value + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("experiments: cannot open config: " + path);

  ExperimentConfig config;
  std::string section_type, section_name;
  std::string line;
  std::size_t line_no = 0;

  const auto fail = [&](const std::string& msg) {
    throw std::runtime_error("experiments: " + path + ":" +
                             std::to_string(line_no) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      const std::string inside = trim(line.substr(1, line.size() - 2));
      const auto space = inside.find(' ');
      section_type = space == std::string::npos ? inside
                                                : trim(inside.substr(0, space));
      section_name = space == std::string::npos ? "" : trim(inside.substr(space + 1));
      if (section_type == "run") {
        if (!section_name.empty()) fail("[run] takes no name");
      } else if (section_type == "dataset") {
        if (section_name.empty()) fail("[dataset] needs a name");
        config.datasets.push_back({});
        config.datasets.back().name = section_name;
      } else if (section_type == "lexicon") {
        if (section_name.empty()) fail("[lexicon] needs a name");
        config.lexicons.push_back({section_name, ""});
      } else if (section_type == "method") {
        if (section_name.empty()) fail("[method] needs a name");
        config.methods.push_back({});
        config.methods.back().name = section_name;
      } else if (section_type == "block") {
        if (section_name.empty()) fail("[block] needs a name");
        config.blocks.push_back({section_name, "", ""});
      } else {
        fail("unknown section type '" + section_type + "'");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section_type.empty()) fail("key outside any section");

    if (section_type == "run") {
      if (key == "seed") config.seed = std::stoull(value);
      else if (key == "alpha") config.alpha = std::stod(value);
      else if (key == "lambda") config.logreg.lambda = std::stod(value);
      else if (key == "tolerance") config.logreg.tolerance = std::stod(value);
      else if (key == "max_iterations") config.logreg.max_iterations = std::stoi(value);
      else if (key == "svd_k") config.svd_k = std::stoi(value);
      else fail("unknown [run] key '" + key + "'");
    } else if (section_type == "dataset") {
      auto& ds = config.datasets.back();
      if (key == "scheme") ds.scheme = value;
      else if (key == "train") ds.train_path = value;
      else if (key == "test") ds.test_path = value;
      else if (key == "file") ds.file_path = value;
      else if (key == "split_manifest") ds.split_manifest = value;
      else if (key == "test_fraction") ds.test_fraction = std::stod(value);
      else if (key == "split_seed") ds.split_seed = std::stoull(value);
      else if (key == "test_only") ds.test_only = parse_bool(value, key);
      else fail("unknown [dataset] key '" + key + "'");
    } else if (section_type == "lexicon") {
      auto& lex = config.lexicons.back();
      if (key == "path") lex.path = value;
      else fail("unknown [lexicon] key '" + key + "'");
    } else if (section_type == "method") {
      auto& m = config.methods.back();
      if (key == "kind") m.kind = value;
      else if (key == "lexicon") m.lexicons = {value};
      else if (key == "lexicons") m.lexicons = split_list(value);
      else if (key == "features") m.features = value;
      else if (key == "vocab_size") m.vocab_size = std::stoi(value);
      else if (key == "k") m.k = std::stoi(value);
      else if (key == "append_stats") m.append_stats = parse_bool(value, key);
      else fail("unknown [method] key '" + key + "'");
    } else if (section_type == "block") {
      auto& b = config.blocks.back();
      if (key == "train") b.train = value;
      else if (key == "test") b.test = value;
      else fail("unknown [block] key '" + key + "'");
    }
  }

  for (const auto& m : config.methods) {
    if (m.kind != "lexicon" && m.kind != "unigram" && m.kind != "combined") {
      throw std::runtime_error("experiments: method '" + m.name +
                               "' has unknown kind '" + m.kind + "'");
    }
  }
  for (const auto& b : config.blocks) {
    if (b.train.empty() || b.test.empty()) {
      throw std::runtime_error("experiments: block '" + b.name +
                               "' needs train and test datasets");
    }
  }
  return config;
}

std::vector<ExperimentSpec> build_specs(const ExperimentConfig& config) {
  std::vector<ExperimentSpec> specs;
  for (const auto& method : config.methods) {
    for (const auto& block : config.blocks) {
      ExperimentSpec spec;
      spec.method_id = method.name;
      spec.train_dataset = block.train;
      spec.test_dataset = block.test;
      spec.seed = config.seed;
      spec.svd_k = method.k > 0 ? method.k : config.svd_k;
      spec.append_stats = method.append_stats;
      if (method.kind == "lexicon") {
        spec.kind = FeaturizerKind::LexiconVector;
        spec.lexicon_ids = method.lexicons;
        if (method.features == "docvec") {
          spec.mode = LexiconFeatureMode::DocVector;
        } else if (method.features == "stats") {
          spec.mode = LexiconFeatureMode::Stats;
        } else if (method.features == "extended") {
          spec.mode = LexiconFeatureMode::Extended;
        } else {
          throw std::runtime_error("experiments: method '" + method.name +
                                   "' has unknown features '" +
                                   method.features + "'");
        }
      } else if (method.kind == "unigram") {
        spec.kind = FeaturizerKind::Unigram;
        spec.unigram_size = method.vocab_size;
      } else {
        spec.kind = FeaturizerKind::Combined;
        spec.lexicon_ids = method.lexicons;
        if (spec.lexicon_ids.empty()) {
          for (const auto& lex : config.lexicons) {
            spec.lexicon_ids.push_back(lex.name);
          }
        }
      }
      specs.push_back(std::move(spec));
    }
  }
  return specs;
}

}  // namespace morallex
