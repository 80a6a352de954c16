#include "nasgraph/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "nasgraph/error.hpp"
#include "nasgraph/rng.hpp"

namespace nasgraph::search {

SearchResult random_search(std::span<const PoolEntry> pool, int n_samples,
                           std::uint64_t seed) {
  if (n_samples < 1) fail(ErrorKind::PoolTooSmall, "need n >= 1");
  if (pool.size() < static_cast<std::size_t>(n_samples)) {
    fail(ErrorKind::PoolTooSmall,
         "pool of " + std::to_string(pool.size()) + " cannot supply " +
             std::to_string(n_samples) + " samples");
  }

  // Partial Fisher-Yates over the index set.
  std::mt19937_64 gen(rng::derive_stream(seed, 0x5ea7c4));
  std::vector<std::size_t> index(pool.size());
  std::iota(index.begin(), index.end(), 0);
  for (int i = 0; i < n_samples; ++i) {
    const std::size_t j =
        i + rng::bounded(gen, static_cast<std::uint64_t>(index.size() - i));
    std::swap(index[i], index[j]);
  }

  SearchResult result;
  const PoolEntry* best = nullptr;
  double gt_val = -1.0, gt_test = -1.0;
  for (int i = 0; i < n_samples; ++i) {
    const PoolEntry& e = pool[index[i]];
    if (best == nullptr || e.metric > best->metric) best = &e;
    gt_val = std::max(gt_val, e.val_acc);
    gt_test = std::max(gt_test, e.test_acc);
  }
  result.best_arch_id = best->arch_id;
  result.best_score = best->metric;
  result.chosen_val_acc = best->val_acc;
  result.chosen_test_acc = best->test_acc;
  result.gt_val_acc = gt_val;
  result.gt_test_acc = gt_test;
  return result;
}

namespace {

TrialStats stats_of(const std::vector<double>& xs) {
  TrialStats s;
  s.trials = static_cast<int>(xs.size());
  double total = 0.0;
  for (double x : xs) total += x;
  s.mean = total / static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(var / static_cast<double>(xs.size()));
  return s;
}

}  // namespace

TrialSummary repeated_trials(std::span<const PoolEntry> pool, int n_samples,
                             int trials, std::uint64_t base_seed) {
  if (trials < 1) fail(ErrorKind::PoolTooSmall, "need trials >= 1");
  std::vector<double> chosen_val, chosen_test, gt_val, gt_test;
  chosen_val.reserve(trials);
  chosen_test.reserve(trials);
  gt_val.reserve(trials);
  gt_test.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    const SearchResult r =
        random_search(pool, n_samples, base_seed + static_cast<std::uint64_t>(t));
    chosen_val.push_back(r.chosen_val_acc);
    chosen_test.push_back(r.chosen_test_acc);
    gt_val.push_back(r.gt_val_acc);
    gt_test.push_back(r.gt_test_acc);
  }
  return {stats_of(chosen_val), stats_of(chosen_test), stats_of(gt_val),
          stats_of(gt_test)};
}

}  // namespace nasgraph::search
