#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "morallex/seeds.hpp"

using namespace morallex;

namespace {

FrequencyTable table_from(std::vector<std::pair<std::string, long long>> counts) {
  FrequencyTable t;
  for (const auto& [token, count] : counts) {
    t.counts[token] = count;
    t.total += count;
  }
  return t;
}

}  // namespace

TEST_CASE("relative_frequencies counts occurrences over the total") {
  const auto t = relative_frequencies(
      {{"free", "market", "free"}, {"state", "control"}});
  CHECK(t.total == 5);
  CHECK(t.relfreq("free") == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(t.relfreq("market") == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(t.relfreq("missing") == 0.0);
}

TEST_CASE("relative_frequencies of a single word is one") {
  const auto t = relative_frequencies({{"liberty"}});
  CHECK(t.relfreq("liberty") == 1.0);
}

TEST_CASE("relative_frequencies rejects an all-empty collection") {
  CHECK_THROWS_AS(relative_frequencies({{}, {}}), std::invalid_argument);
}

TEST_CASE("relfreq sums to one over the vocabulary") {
  const auto t = relative_frequencies(
      {{"a", "b", "a", "c"}, {"b", "b", "d"}, {"e"}});
  double sum = 0.0;
  for (const auto& [token, count] : t.counts) sum += t.relfreq(token);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("relfreq is invariant under document concatenation order") {
  const std::vector<std::vector<std::string>> docs = {
      {"a", "b"}, {"c", "a", "a"}, {"b"}};
  auto reversed = docs;
  std::reverse(reversed.begin(), reversed.end());
  const auto t1 = relative_frequencies(docs);
  const auto t2 = relative_frequencies(reversed);
  CHECK(t1.counts == t2.counts);
  CHECK(t1.total == t2.total);
}

TEST_CASE("frequency_shift subtracts side1 from side2") {
  const auto side1 = table_from({{"free", 1}, {"other", 9}});
  const auto side2 = table_from({{"free", 4}, {"other", 6}});
  const auto shift = frequency_shift(side1, side2);
  CHECK(shift.shifts.at("free") == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("frequency_shift of identical tables is zero") {
  const auto t = table_from({{"a", 3}, {"b", 7}});
  const auto shift = frequency_shift(t, t);
  for (const auto& [token, delta] : shift.shifts) CHECK(delta == 0.0);
}

TEST_CASE("frequency_shift treats absent tokens as zero relfreq") {
  const auto side1 = table_from({{"x", 4}, {"y", 4}});  // only x, y
  const auto side2 = table_from({{"x", 4}, {"z", 1}});  // z new, p2(z)=0.2
  const auto shift = frequency_shift(side1, side2);
  CHECK(shift.shifts.at("z") == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(shift.shifts.at("y") == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("select_seeds takes the extreme shifts on each side") {
  ShiftTable shift;
  shift.side1 = table_from({{"a", 1}, {"b", 1}, {"c", 5}, {"d", 9}});
  shift.side2 = table_from({{"a", 7}, {"b", 3}, {"c", 1}, {"d", 1}});
  shift.shifts = {{"a", 0.3}, {"b", 0.1}, {"c", -0.2}, {"d", -0.4}};
  const auto seeds = select_seeds(shift, 1, 0);
  CHECK(seeds.liberty == std::vector<std::string>{"a"});
  CHECK(seeds.oppression == std::vector<std::string>{"d"});
}

TEST_CASE("select_seeds enforces the minimum combined frequency") {
  ShiftTable shift;
  shift.side1 = table_from({{"big", 50}, {"rare", 49}, {"low", 60}});
  shift.side2 = table_from({{"big", 70}, {"rare", 50}, {"low", 40}});
  shift.shifts = {{"big", 0.1}, {"rare", 0.9}, {"low", -0.3}};
  const auto seeds = select_seeds(shift, 2, 100);
  // "rare" has the largest shift but combined frequency 99 < 100.
  CHECK(seeds.liberty == std::vector<std::string>{"big"});
  CHECK(seeds.oppression == std::vector<std::string>{"low"});
}

TEST_CASE("select_seeds errors when every shift is zero") {
  ShiftTable shift;
  shift.side1 = table_from({{"a", 5}, {"b", 5}});
  shift.side2 = shift.side1;
  shift.shifts = {{"a", 0.0}, {"b", 0.0}};
  CHECK_THROWS_AS(select_seeds(shift, 3, 0), std::runtime_error);
}

TEST_CASE("select_seeds breaks shift ties lexicographically") {
  ShiftTable shift;
  shift.side1 = table_from({{"zebra", 5}, {"apple", 5}, {"down", 10}});
  shift.side2 = table_from({{"zebra", 10}, {"apple", 10}, {"down", 2}});
  shift.shifts = {{"zebra", 0.2}, {"apple", 0.2}, {"down", -0.4}};
  const auto seeds = select_seeds(shift, 1, 0);
  CHECK(seeds.liberty == std::vector<std::string>{"apple"});
}

TEST_CASE("swapping sides negates shifts and swaps the seed lists") {
  const auto side1 = table_from({{"a", 2}, {"b", 8}, {"c", 10}});
  const auto side2 = table_from({{"a", 9}, {"b", 1}, {"c", 10}});
  const auto forward = frequency_shift(side1, side2);
  const auto backward = frequency_shift(side2, side1);
  for (const auto& [token, delta] : forward.shifts) {
    CHECK(backward.shifts.at(token) == doctest::Approx(-delta).epsilon(1e-12));
  }
  const auto seeds_fwd = select_seeds(forward, 1, 0);
  const auto seeds_bwd = select_seeds(backward, 1, 0);
  CHECK(seeds_fwd.liberty == seeds_bwd.oppression);
  CHECK(seeds_fwd.oppression == seeds_bwd.liberty);
}

TEST_CASE("seed sets are disjoint and deterministic") {
  ShiftTable shift;
  shift.side1 = table_from({{"a", 5}, {"b", 5}, {"c", 5}, {"d", 5}});
  shift.side2 = table_from({{"a", 9}, {"b", 7}, {"c", 3}, {"d", 1}});
  shift.shifts = {{"a", 0.2}, {"b", 0.1}, {"c", -0.1}, {"d", -0.2}};
  const auto s1 = select_seeds(shift, 2, 0);
  const auto s2 = select_seeds(shift, 2, 0);
  CHECK(s1.liberty == s2.liberty);
  CHECK(s1.oppression == s2.oppression);
  for (const auto& t : s1.liberty) {
    CHECK(std::find(s1.oppression.begin(), s1.oppression.end(), t) ==
          s1.oppression.end());
  }
}

TEST_CASE("seeds JSON round-trip") {
  SeedSets seeds;
  seeds.liberty = {"freedom", "choice"};
  seeds.oppression = {"control"};
  seeds.k = 2;
  seeds.min_frequency = 100;
  seeds.side2_name = "libertarian";
  const auto path =
      (std::filesystem::temp_directory_path() / "seeds_rt.json").string();
  save_seeds(seeds, path);
  const auto back = load_seeds(path);
  CHECK(back.liberty == seeds.liberty);
  CHECK(back.oppression == seeds.oppression);
  CHECK(back.k == seeds.k);
  CHECK(back.min_frequency == seeds.min_frequency);
  CHECK(back.side2_name == seeds.side2_name);
}
