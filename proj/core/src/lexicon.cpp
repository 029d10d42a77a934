#include "morallex/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "morallex/util/digest.hpp"
#include "morallex/util/log.hpp"
#include "morallex/util/text.hpp"

namespace morallex {

std::string rescale_mode_name(RescaleMode mode) {
  switch (mode) {
    case RescaleMode::None: return "none";
    case RescaleMode::MinmaxSymmetric: return "minmax_symmetric";
    case RescaleMode::Zscore: return "zscore";
  }
  return "?";
}

RescaleMode parse_rescale_mode(const std::string& name) {
  if (name == "none") return RescaleMode::None;
  if (name == "minmax_symmetric") return RescaleMode::MinmaxSymmetric;
  if (name == "zscore") return RescaleMode::Zscore;
  throw std::invalid_argument("lexicon: unknown rescale mode '" + name + "'");
}

void Lexicon::add(const std::string& token, double score,
                  std::vector<std::pair<std::string, double>> aux) {
  if (!std::isfinite(score)) {
    throw std::invalid_argument("lexicon: non-finite score for token '" +
                                token + "'");
  }
  for (const auto& [cls, value] : aux) {
    if (!std::isfinite(value)) {
      throw std::invalid_argument("lexicon: non-finite aux score for token '" +
                                  token + "' class '" + cls + "'");
    }
  }
  if (!index_.emplace(token, entries_.size()).second) {
    throw std::invalid_argument("lexicon: duplicate token '" + token + "'");
  }
  entries_.push_back(Entry{token, score, std::move(aux)});
  digest_cache_.clear();
}

bool Lexicon::contains(const std::string& token) const {
  return index_.count(token) > 0;
}

std::optional<double> Lexicon::score(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].score;
}

const Lexicon::Entry* Lexicon::find(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::string Lexicon::method() const {
  auto it = metadata_.find("method");
  return it == metadata_.end() ? "" : it->second;
}

std::string Lexicon::to_tsv() const {
  std::ostringstream out;
  for (const auto& [key, value] : metadata_) {
    out << "#" << key << "=" << value << "\n";
  }
  for (const auto& entry : entries_) {
    out << entry.token << "\t" << format_score(entry.score);
    for (const auto& [cls, value] : entry.aux) {
      out << "\t" << cls << ":" << format_score(value);
    }
    out << "\n";
  }
  return out.str();
}

const std::string& Lexicon::digest() const {
  if (digest_cache_.empty()) digest_cache_ = sha256_hex(to_tsv());
  return digest_cache_;
}

void save_lexicon(const Lexicon& lexicon, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("lexicon: cannot write file: " + path);
  out << lexicon.to_tsv();
  if (!out) throw std::runtime_error("lexicon: write failed: " + path);
}

Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("lexicon: cannot open file: " + path);
  Lexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos && eq > 1) {
        lexicon.metadata()[line.substr(1, eq - 1)] = line.substr(eq + 1);
      }
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() < 2 || fields[0].empty()) {
      throw std::runtime_error("lexicon: " + path + ":" +
                               std::to_string(line_no) + ": malformed row");
    }
    char* end = nullptr;
    const double score = std::strtod(fields[1].c_str(), &end);
    if (end == fields[1].c_str() || *end != '\0') {
      throw std::runtime_error("lexicon: " + path + ":" +
                               std::to_string(line_no) +
                               ": bad score '" + fields[1] + "'");
    }
    std::vector<std::pair<std::string, double>> aux;
    for (std::size_t i = 2; i < fields.size(); ++i) {
      const auto colon = fields[i].rfind(':');
      if (colon == std::string::npos || colon == 0) {
        throw std::runtime_error("lexicon: " + path + ":" +
                                 std::to_string(line_no) +
                                 ": bad class:score field '" + fields[i] + "'");
      }
      const std::string cls = fields[i].substr(0, colon);
      const std::string val = fields[i].substr(colon + 1);
      char* aend = nullptr;
      const double v = std::strtod(val.c_str(), &aend);
      if (aend == val.c_str() || *aend != '\0') {
        throw std::runtime_error("lexicon: " + path + ":" +
                                 std::to_string(line_no) +
                                 ": bad class score '" + fields[i] + "'");
      }
      aux.emplace_back(cls, v);
    }
    try {
      lexicon.add(fields[0], score, std::move(aux));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("lexicon: " + path + ":" +
                               std::to_string(line_no) + ": " + e.what());
    }
  }
  if (lexicon.method().empty()) {
    log::warn("lexicon: " + path + " carries no method metadata");
  }
  return lexicon;
}

Lexicon rescale(const Lexicon& lexicon, RescaleMode mode) {
  if (lexicon.empty()) {
    throw std::invalid_argument("lexicon: cannot rescale an empty lexicon");
  }
  if (mode == RescaleMode::None) return lexicon;

  double lo = lexicon.entries().front().score;
  double hi = lo;
  double sum = 0.0;
  for (const auto& entry : lexicon.entries()) {
    lo = std::min(lo, entry.score);
    hi = std::max(hi, entry.score);
    sum += entry.score;
  }
  const double n = static_cast<double>(lexicon.size());

  Lexicon out;
  out.metadata() = lexicon.metadata();
  out.metadata()["rescale"] = rescale_mode_name(mode);
  if (mode == RescaleMode::MinmaxSymmetric) {
    if (hi <= lo) {
      throw std::invalid_argument(
          "lexicon: minmax_symmetric rescale needs max score > min score");
    }
    for (const auto& entry : lexicon.entries()) {
      out.add(entry.token, 2.0 * (entry.score - lo) / (hi - lo) - 1.0,
              entry.aux);
    }
  } else {
    const double mean = sum / n;
    double var = 0.0;
    for (const auto& entry : lexicon.entries()) {
      var += (entry.score - mean) * (entry.score - mean);
    }
    var /= n;
    if (var <= 0.0) {
      throw std::invalid_argument(
          "lexicon: zscore rescale needs non-constant scores");
    }
    const double sd = std::sqrt(var);
    for (const auto& entry : lexicon.entries()) {
      out.add(entry.token, (entry.score - mean) / sd, entry.aux);
    }
  }
  return out;
}

Lexicon overlap_merge(const std::vector<Lexicon>& lexicons,
                      double selection_percent,
                      RescaleMode constituent_rescale) {
  const std::size_t n = lexicons.size();
  if (n < 2) {
    throw std::invalid_argument("lexicon: overlap_merge needs at least two lexicons");
  }
  if (!(selection_percent > 0.0 && selection_percent <= 100.0)) {
    throw std::invalid_argument(
        "lexicon: selection parameter must be in (0, 100]");
  }
  // ceil(p/100 * N); the epsilon absorbs FP noise in p*N/100 at integers.
  const int threshold = std::max(
      1, static_cast<int>(std::ceil(selection_percent * static_cast<double>(n) /
                                        100.0 -
                                    1e-9)));

  std::vector<Lexicon> prepared;
  prepared.reserve(n);
  std::vector<std::string> constituent_digests;
  for (const auto& lex : lexicons) {
    constituent_digests.push_back(lex.short_id());
    prepared.push_back(constituent_rescale == RescaleMode::None
                           ? lex
                           : rescale(lex, constituent_rescale));
  }

  std::map<std::string, std::pair<double, int>> acc;  // token -> (sum, count)
  for (const auto& lex : prepared) {
    for (const auto& entry : lex.entries()) {
      auto& [sum, count] = acc[entry.token];
      sum += entry.score;
      ++count;
    }
  }

  Lexicon out;
  out.metadata()["method"] = "OVERLAP";
  out.metadata()["selection_percent"] = format_score(selection_percent);
  out.metadata()["inclusion_threshold"] = std::to_string(threshold);
  out.metadata()["constituents"] = std::to_string(n);
  out.metadata()["constituent_digests"] = join(constituent_digests, ",");
  out.metadata()["constituent_rescale"] = rescale_mode_name(constituent_rescale);
  for (const auto& [token, sc] : acc) {
    if (sc.second >= threshold) {
      out.add(token, sc.first / static_cast<double>(sc.second));
    }
  }
  if (out.empty()) {
    log::warn("lexicon: overlap_merge produced an empty vocabulary at selection " +
              format_score(selection_percent));
  }
  return out;
}

LexiconComparison compare(const Lexicon& a, const Lexicon& b) {
  const Lexicon ra = rescale(a, RescaleMode::MinmaxSymmetric);
  const Lexicon rb = rescale(b, RescaleMode::MinmaxSymmetric);

  LexiconComparison result;
  double sum = 0.0;
  for (const auto& entry : ra.entries()) {
    const auto other = rb.score(entry.token);
    if (!other) continue;
    const double diff = entry.score - *other;
    sum += std::fabs(diff);
    result.most_distant.emplace_back(entry.token, diff);
  }
  if (result.most_distant.empty()) {
    throw std::invalid_argument("lexicon: compare requires a shared vocabulary");
  }
  std::sort(result.most_distant.begin(), result.most_distant.end(),
            [](const auto& x, const auto& y) {
              const double mx = std::fabs(x.second);
              const double my = std::fabs(y.second);
              if (mx != my) return mx > my;
              return x.first < y.first;
            });
  result.distance = sum / static_cast<double>(result.most_distant.size());
  return result;
}

}  // namespace morallex
