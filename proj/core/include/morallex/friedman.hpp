#ifndef MORALLEX_FRIEDMAN_HPP
#define MORALLEX_FRIEDMAN_HPP

#include <string>
#include <vector>

namespace morallex {

struct FriedmanResult {
  std::vector<double> average_ranks;  // per method; lower is better
  double statistic = 0.0;             // tie-corrected chi-square statistic
  double p_value = 1.0;
  bool reject_null = false;
  std::string p_method;  // "exact" or "chi_squared"
};

// Ranks of one block: best (largest) score gets rank 1; ties receive the
// mean of the covered rank positions.
std::vector<double> rank_block(const std::vector<double>& scores);

// scores[m][b]: method m evaluated on block b. Requires >= 2 methods and
// >= 2 blocks, all cells present. The p-value comes from the exact
// permutation distribution when the table is small enough, otherwise from
// the chi-square approximation with k-1 degrees of freedom.
FriedmanResult friedman_rank(const std::vector<std::vector<double>>& scores,
                             double alpha);

}  // namespace morallex

#endif
