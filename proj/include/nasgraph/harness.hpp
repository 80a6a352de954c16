#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nasgraph/archspec.hpp"
#include "nasgraph/measures.hpp"
#include "nasgraph/ranker.hpp"
#include "nasgraph/search.hpp"

namespace nasgraph::harness {

struct DatasetAccuracy {
  double val_acc = 0.0;   // percent
  double test_acc = 0.0;  // percent
};

struct BenchmarkRecord {
  std::string arch;  // NB201-style encoding
  std::map<std::string, DatasetAccuracy> accuracies;
};

/// JSON-Lines, one record per line:
///   {"arch": "...", "acc": {"cifar10": {"val": 89.1, "test": 88.7}, ...}}
/// Errors carry the 1-based line number.
std::vector<BenchmarkRecord> load_benchmark(const std::string& path);
std::vector<BenchmarkRecord> parse_benchmark(std::istream& in,
                                             const std::string& origin);

/// External per-architecture scores, JSON-Lines: {"arch": "...", "score": x}
std::map<std::string, double> load_scores(const std::string& path);

struct PipelineConfig {
  archspec::SurrogateConfig surrogate;
  measures::MeasureKind measure = measures::MeasureKind::AvgDeg;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7};
  int jobs = 0;  // <= 0: one worker per logical CPU
};

/// Proxy score per record, fanned out over worker threads. Output order
/// matches input order regardless of the job count.
std::vector<double> score_records(std::span<const BenchmarkRecord> records,
                                  const PipelineConfig& config);

struct ScoreReport {
  std::string arch;
  std::vector<double> per_seed;
  double score = 0.0;
  double wall_seconds = 0.0;
  double cpu_seconds = 0.0;
  PipelineConfig config;
};

ScoreReport run_score(const std::string& arch, const PipelineConfig& config);
std::string score_text(const ScoreReport& report);
std::string score_json(const ScoreReport& report);

struct ConvertReport {
  std::string content;  // rendered graph in the requested format
  int node_count = 0;
  std::size_t edge_count = 0;
};

ConvertReport run_convert(const std::string& arch,
                          const archspec::SurrogateConfig& surrogate,
                          std::uint64_t seed, const std::string& format);

struct CorrelateReport {
  std::string dataset;
  std::vector<std::string> archs;
  std::vector<double> scores;
  std::vector<double> val_accs;
  std::vector<double> test_accs;
  std::vector<double> rank_score;
  std::vector<double> rank_acc;  // by test accuracy
  double rho_val = 0.0, tau_val = 0.0;
  double rho_test = 0.0, tau_test = 0.0;
  double wall_seconds = 0.0;
  double cpu_seconds = 0.0;
  PipelineConfig config;
};

CorrelateReport run_correlate(const std::string& bench_path,
                              const std::string& dataset,
                              const PipelineConfig& config);

/// `arch,score,val_acc,test_acc,rank_score,rank_acc` with a header row.
std::string correlate_csv(const CorrelateReport& report);
std::string correlate_text(const CorrelateReport& report);

struct SearchReport {
  std::string dataset;
  std::string metric_name;  // measure name or "gt"
  int n_samples = 0;
  int trials = 0;
  search::TrialSummary summary;
  double wall_seconds = 0.0;
  double cpu_seconds = 0.0;
};

/// measure = nullopt runs ground-truth mode: the validation column uses
/// validation accuracy as the metric and the test column test accuracy,
/// over the same sampled subsets.
SearchReport run_search(const std::string& bench_path,
                        const std::string& dataset,
                        std::optional<measures::MeasureKind> measure,
                        const PipelineConfig& config, int n_samples,
                        int trials, std::uint64_t seed);
std::string search_text(const SearchReport& report);

struct BiasRunReport {
  std::string dataset;
  std::string metric_name;
  double top_fraction = 0.10;
  ranker::BiasReport bias;
};

/// scores_path, when set, supplies the metric ranking externally; otherwise
/// the configured measure is scored through the pipeline. GT ranks by test
/// accuracy.
BiasRunReport run_bias(const std::string& bench_path,
                       const std::string& dataset,
                       const PipelineConfig& config, double top_fraction,
                       const std::optional<std::string>& scores_path);
std::string bias_text(const BiasRunReport& report);

void write_file(const std::string& path, const std::string& content);

}  // namespace nasgraph::harness
