#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nasgraph/archspec.hpp"

namespace nasgraph::ranker {

/// Descending ranks: highest score gets rank 1, tied groups share their
/// average rank. The result always sums to n(n+1)/2.
std::vector<double> rank_with_ties(std::span<const double> scores);

/// Pearson correlation of the tied ranks of x and y.
double spearman_rho(std::span<const double> x, std::span<const double> y);

/// Kendall tau-b: (concordant - discordant) / sqrt((n0 - n1)(n0 - n2)).
/// Discordant pairs are counted by merge-sort inversion counting, so large
/// inputs stay O(n log n).
double kendall_tau(std::span<const double> x, std::span<const double> y);

/// Re-rank by summed ranks; the smaller the sum the better the combined rank.
std::vector<double> combined_rank(std::span<const double> ranks_a,
                                  std::span<const double> ranks_b);

/// L1 distance between two rank vectors over the same items.
double pair_rank_difference(std::span<const double> rank_i,
                            std::span<const double> rank_j);

struct RankTable {
  struct Entry {
    std::string arch_id;
    double score = 0.0;
    double rank = 0.0;
  };
  std::vector<Entry> entries;
};

RankTable make_rank_table(std::span<const std::string> arch_ids,
                          std::span<const double> scores);

struct BiasReport {
  std::array<double, archspec::kOperationCount> metric_freq{};
  std::array<double, archspec::kOperationCount> gt_freq{};
  double bias = 0.0;
  int selected_count = 0;
};

/// Operation-frequency histograms over the top ceil(fraction * n)
/// architectures of each ranking (ties broken by table order), and their
/// accumulated absolute difference.
BiasReport operation_bias(const RankTable& metric_table,
                          const RankTable& gt_table,
                          const std::map<std::string, archspec::CellSpec>& cells,
                          double top_fraction);

}  // namespace nasgraph::ranker
