#ifndef MORALLEX_SEEDS_HPP
#define MORALLEX_SEEDS_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace morallex {

// Raw counts and relative frequencies over one document collection.
struct FrequencyTable {
  std::unordered_map<std::string, long long> counts;
  long long total = 0;

  double relfreq(const std::string& token) const {
    auto it = counts.find(token);
    if (it == counts.end() || total == 0) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(total);
  }
  long long count(const std::string& token) const {
    auto it = counts.find(token);
    return it == counts.end() ? 0 : it->second;
  }
};

// Per-token relative-frequency shift between two collections,
// shift = side2 - side1 over the union vocabulary (absent token = 0).
struct ShiftTable {
  std::unordered_map<std::string, double> shifts;
  FrequencyTable side1;
  FrequencyTable side2;
};

// Data-driven seed word lists. `liberty` holds the strongest shifts toward
// side2, `oppression` the strongest shifts toward side1; both ordered by
// shift magnitude, ties broken lexicographically.
struct SeedSets {
  std::vector<std::string> liberty;
  std::vector<std::string> oppression;
  int k = 0;
  long long min_frequency = 0;
  std::string side2_name;  // which partition was declared liberty-positive
};

FrequencyTable relative_frequencies(
    const std::vector<std::vector<std::string>>& documents);

ShiftTable frequency_shift(const FrequencyTable& side1,
                           const FrequencyTable& side2);

SeedSets select_seeds(const ShiftTable& shift, int k, long long min_frequency);

void save_seeds(const SeedSets& seeds, const std::string& path);
SeedSets load_seeds(const std::string& path);
std::string seeds_to_json(const SeedSets& seeds);

}  // namespace morallex

#endif
