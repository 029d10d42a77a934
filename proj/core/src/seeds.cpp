#include "morallex/seeds.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "morallex/util/log.hpp"

namespace morallex {

using nlohmann::json;

FrequencyTable relative_frequencies(
    const std::vector<std::vector<std::string>>& documents) {
  FrequencyTable table;
  for (const auto& doc : documents) {
    for (const auto& token : doc) {
      ++table.counts[token];
      ++table.total;
    }
  }
  if (table.total == 0) {
    throw std::invalid_argument(
        "seeds: relative_frequencies needs at least one token");
  }
  return table;
}

ShiftTable frequency_shift(const FrequencyTable& side1,
                           const FrequencyTable& side2) {
  ShiftTable table;
  table.side1 = side1;
  table.side2 = side2;
  for (const auto& [token, _] : side1.counts) {
    table.shifts[token] = side2.relfreq(token) - side1.relfreq(token);
  }
  for (const auto& [token, _] : side2.counts) {
    if (!table.shifts.count(token)) {
      table.shifts[token] = side2.relfreq(token) - side1.relfreq(token);
    }
  }
  return table;
}

SeedSets select_seeds(const ShiftTable& shift, int k, long long min_frequency) {
  if (k < 1) throw std::invalid_argument("seeds: k must be >= 1");

  struct Cand {
    std::string token;
    double shift;
  };
  std::vector<Cand> liberty_side;
  std::vector<Cand> oppression_side;
  for (const auto& [token, delta] : shift.shifts) {
    const long long combined =
        shift.side1.count(token) + shift.side2.count(token);
    if (combined < min_frequency) continue;
    if (delta > 0) {
      liberty_side.push_back({token, delta});
    } else if (delta < 0) {
      oppression_side.push_back({token, delta});
    }
    // delta == 0 carries no direction signal and is never a seed.
  }
  if (liberty_side.empty() && oppression_side.empty()) {
    throw std::runtime_error(
        "seeds: no qualifying token on either side (no direction signal)");
  }

  const auto by_magnitude_desc = [](bool positive) {
    return [positive](const Cand& a, const Cand& b) {
      const double ma = positive ? a.shift : -a.shift;
      const double mb = positive ? b.shift : -b.shift;
      if (ma != mb) return ma > mb;
      return a.token < b.token;
    };
  };
  std::sort(liberty_side.begin(), liberty_side.end(), by_magnitude_desc(true));
  std::sort(oppression_side.begin(), oppression_side.end(),
            by_magnitude_desc(false));

  SeedSets seeds;
  seeds.k = k;
  seeds.min_frequency = min_frequency;
  for (int i = 0; i < k && i < static_cast<int>(liberty_side.size()); ++i) {
    seeds.liberty.push_back(liberty_side[static_cast<std::size_t>(i)].token);
  }
  for (int i = 0; i < k && i < static_cast<int>(oppression_side.size()); ++i) {
    seeds.oppression.push_back(
        oppression_side[static_cast<std::size_t>(i)].token);
  }
  if (static_cast<int>(seeds.liberty.size()) < k) {
    log::warn("seeds: only " + std::to_string(seeds.liberty.size()) + " of " +
              std::to_string(k) + " liberty seeds qualify");
  }
  if (static_cast<int>(seeds.oppression.size()) < k) {
    log::warn("seeds: only " + std::to_string(seeds.oppression.size()) +
              " of " + std::to_string(k) + " oppression seeds qualify");
  }
  return seeds;
}

std::string seeds_to_json(const SeedSets& seeds) {
  json obj;
  obj["liberty"] = seeds.liberty;
  obj["oppression"] = seeds.oppression;
  obj["k"] = seeds.k;
  obj["min_frequency"] = seeds.min_frequency;
  obj["side2_name"] = seeds.side2_name;
  return obj.dump(2) + "\n";
}

void save_seeds(const SeedSets& seeds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("seeds: cannot write file: " + path);
  out << seeds_to_json(seeds);
}

SeedSets load_seeds(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("seeds: cannot open file: " + path);
  json obj = json::parse(in);
  SeedSets seeds;
  seeds.liberty = obj.at("liberty").get<std::vector<std::string>>();
  seeds.oppression = obj.at("oppression").get<std::vector<std::string>>();
  seeds.k = obj.at("k").get<int>();
  seeds.min_frequency = obj.at("min_frequency").get<long long>();
  seeds.side2_name = obj.value("side2_name", "");
  return seeds;
}

}  // namespace morallex
