#include "nasgraph/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>

#include "nasgraph/error.hpp"

namespace nasgraph::ranker {

namespace {

void check_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      fail(ErrorKind::NonFiniteScore, "non-finite value in score list");
    }
  }
}

void check_same_length(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    fail(ErrorKind::LengthMismatch,
         std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  }
}

// Strict inversions of `values` counted by merge sort; equal elements are
// kept stable and not counted.
std::uint64_t count_inversions(std::vector<double>& values,
                               std::vector<double>& scratch, std::size_t lo,
                               std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = count_inversions(values, scratch, lo, mid) +
                      count_inversions(values, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (values[j] < values[i]) {
      inv += mid - i;
      scratch[k++] = values[j++];
    } else {
      scratch[k++] = values[i++];
    }
  }
  while (i < mid) scratch[k++] = values[i++];
  while (j < hi) scratch[k++] = values[j++];
  std::copy(scratch.begin() + lo, scratch.begin() + hi, values.begin() + lo);
  return inv;
}

std::uint64_t tie_pair_count(std::vector<double> sorted_values) {
  std::uint64_t pairs = 0;
  std::size_t i = 0;
  while (i < sorted_values.size()) {
    std::size_t j = i;
    while (j < sorted_values.size() && sorted_values[j] == sorted_values[i]) {
      ++j;
    }
    const std::uint64_t t = j - i;
    pairs += t * (t - 1) / 2;
    i = j;
  }
  return pairs;
}

}  // namespace

std::vector<double> rank_with_ties(std::span<const double> scores) {
  if (scores.empty()) fail(ErrorKind::EmptyInput, "cannot rank an empty list");
  check_finite(scores);

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];  // descending
                   });

  std::vector<double> ranks(scores.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    // positions i..j-1 (0-based) share the mean of ranks i+1..j.
    const double mean_rank = static_cast<double>(i + 1 + j) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mean_rank;
    i = j;
  }
  return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  check_same_length(x, y);
  if (x.size() < 2) fail(ErrorKind::DegenerateInput, "need at least 2 points");
  const std::vector<double> rx = rank_with_ties(x);
  const std::vector<double> ry = rank_with_ties(y);

  const double n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;  // rank vectors always average this
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double a = rx[i] - mean;
    const double b = ry[i] - mean;
    sxx += a * a;
    syy += b * b;
    sxy += a * b;
  }
  if (sxx == 0.0 || syy == 0.0) {
    fail(ErrorKind::DegenerateInput, "zero rank variance (all values tied)");
  }
  return sxy / std::sqrt(sxx * syy);
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  check_same_length(x, y);
  if (x.size() < 2) fail(ErrorKind::DegenerateInput, "need at least 2 points");
  check_finite(x);
  check_finite(y);

  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
  });

  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;

  // Tie pair counts: in x (n1), in y (n2), joint (n3).
  std::uint64_t n1 = 0, n3 = 0;
  {
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      std::uint64_t joint_run = 1;
      while (j + 1 < n && x[order[j + 1]] == x[order[i]]) {
        if (y[order[j + 1]] == y[order[j]]) {
          ++joint_run;
        } else {
          n3 += joint_run * (joint_run - 1) / 2;
          joint_run = 1;
        }
        ++j;
      }
      n3 += joint_run * (joint_run - 1) / 2;
      const std::uint64_t t = j - i + 1;
      n1 += t * (t - 1) / 2;
      i = j + 1;
    }
  }
  std::uint64_t n2 = 0;
  {
    std::vector<double> ys(y.begin(), y.end());
    std::sort(ys.begin(), ys.end());
    n2 = tie_pair_count(std::move(ys));
  }
  if (n0 == n1 || n0 == n2) {
    fail(ErrorKind::DegenerateInput, "a fully tied list has no rank order");
  }

  std::vector<double> seq(n);
  for (std::size_t i = 0; i < n; ++i) seq[i] = y[order[i]];
  std::vector<double> scratch(n);
  const std::uint64_t discordant = count_inversions(seq, scratch, 0, n);

  const double concordant = static_cast<double>(n0) - static_cast<double>(n1) -
                            static_cast<double>(n2) +
                            static_cast<double>(n3) -
                            static_cast<double>(discordant);
  const double denom = std::sqrt(static_cast<double>(n0 - n1)) *
                       std::sqrt(static_cast<double>(n0 - n2));
  return (concordant - static_cast<double>(discordant)) / denom;
}

std::vector<double> combined_rank(std::span<const double> ranks_a,
                                  std::span<const double> ranks_b) {
  check_same_length(ranks_a, ranks_b);
  std::vector<double> negative_sum(ranks_a.size());
  for (std::size_t i = 0; i < ranks_a.size(); ++i) {
    negative_sum[i] = -(ranks_a[i] + ranks_b[i]);
  }
  return rank_with_ties(negative_sum);
}

double pair_rank_difference(std::span<const double> rank_i,
                            std::span<const double> rank_j) {
  check_same_length(rank_i, rank_j);
  double total = 0.0;
  for (std::size_t k = 0; k < rank_i.size(); ++k) {
    total += std::abs(rank_i[k] - rank_j[k]);
  }
  return total;
}

RankTable make_rank_table(std::span<const std::string> arch_ids,
                          std::span<const double> scores) {
  if (arch_ids.size() != scores.size()) {
    fail(ErrorKind::LengthMismatch, "ids vs scores");
  }
  const std::vector<double> ranks = rank_with_ties(scores);
  RankTable table;
  table.entries.reserve(arch_ids.size());
  for (std::size_t i = 0; i < arch_ids.size(); ++i) {
    table.entries.push_back({arch_ids[i], scores[i], ranks[i]});
  }
  return table;
}

namespace {

std::vector<const RankTable::Entry*> top_fraction_of(const RankTable& table,
                                                     int k) {
  std::vector<const RankTable::Entry*> entries;
  entries.reserve(table.entries.size());
  for (const auto& e : table.entries) entries.push_back(&e);
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto* a, const auto* b) { return a->rank < b->rank; });
  entries.resize(k);
  return entries;
}

std::array<double, archspec::kOperationCount> operation_frequencies(
    const std::vector<const RankTable::Entry*>& selection,
    const std::map<std::string, archspec::CellSpec>& cells) {
  std::array<std::int64_t, archspec::kOperationCount> counts{};
  std::int64_t total = 0;
  for (const auto* entry : selection) {
    const auto it = cells.find(entry->arch_id);
    if (it == cells.end()) {
      fail(ErrorKind::MismatchedUniverse,
           "no cell for architecture '" + entry->arch_id + "'");
    }
    for (const archspec::CellEdge& e : it->second.edges) {
      ++counts[static_cast<int>(e.op)];
      ++total;
    }
  }
  if (total == 0) {
    fail(ErrorKind::DegenerateInput, "selected cells contain no operations");
  }
  std::array<double, archspec::kOperationCount> freq{};
  for (int i = 0; i < archspec::kOperationCount; ++i) {
    freq[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return freq;
}

}  // namespace

BiasReport operation_bias(const RankTable& metric_table,
                          const RankTable& gt_table,
                          const std::map<std::string, archspec::CellSpec>& cells,
                          double top_fraction) {
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    fail(ErrorKind::DegenerateInput, "top_fraction must be in (0, 1]");
  }
  if (metric_table.entries.size() != gt_table.entries.size()) {
    fail(ErrorKind::MismatchedUniverse, "rank tables differ in size");
  }
  std::multiset<std::string> metric_ids, gt_ids;
  for (const auto& e : metric_table.entries) metric_ids.insert(e.arch_id);
  for (const auto& e : gt_table.entries) gt_ids.insert(e.arch_id);
  if (metric_ids != gt_ids) {
    fail(ErrorKind::MismatchedUniverse,
         "rank tables cover different architectures");
  }

  const int n = static_cast<int>(metric_table.entries.size());
  const int k = static_cast<int>(
      std::ceil(top_fraction * static_cast<double>(n)));

  BiasReport report;
  report.selected_count = k;
  report.metric_freq =
      operation_frequencies(top_fraction_of(metric_table, k), cells);
  report.gt_freq = operation_frequencies(top_fraction_of(gt_table, k), cells);
  for (int i = 0; i < archspec::kOperationCount; ++i) {
    report.bias += std::abs(report.metric_freq[i] - report.gt_freq[i]);
  }
  return report;
}

}  // namespace nasgraph::ranker
