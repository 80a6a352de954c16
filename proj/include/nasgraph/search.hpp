#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace nasgraph::search {

/// One searchable candidate: precomputed proxy metric plus the benchmark
/// accuracies used for reporting (percent; NaN when no records exist).
struct PoolEntry {
  std::string arch_id;
  double metric = 0.0;
  double val_acc = 0.0;
  double test_acc = 0.0;
};

struct SearchResult {
  std::string best_arch_id;
  double best_score = 0.0;
  double chosen_val_acc = 0.0;
  double chosen_test_acc = 0.0;
  double gt_val_acc = 0.0;   // max over the sampled subset
  double gt_test_acc = 0.0;
};

struct TrialStats {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  int trials = 0;
};

struct TrialSummary {
  TrialStats chosen_val;
  TrialStats chosen_test;
  TrialStats gt_val;
  TrialStats gt_test;
};

/// Sample n_samples entries without replacement (seeded) and return the one
/// maximizing the metric; ties keep the first-sampled entry (strict `>`
/// update). GT fields are the subset maxima of the accuracies.
SearchResult random_search(std::span<const PoolEntry> pool, int n_samples,
                           std::uint64_t seed);

/// random_search with seeds base_seed .. base_seed + trials - 1. The sampled
/// subset per trial depends only on (pool order, seed), so different metrics
/// evaluated at the same base seed see the same subsets.
TrialSummary repeated_trials(std::span<const PoolEntry> pool, int n_samples,
                             int trials, std::uint64_t base_seed);

}  // namespace nasgraph::search
