#include "nasgraph/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nasgraph/error.hpp"
#include "nasgraph/graphify.hpp"

namespace nasgraph::harness {

namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

class StopwatchPair {
 public:
  StopwatchPair()
      : wall_start_(std::chrono::steady_clock::now()),
        cpu_start_(std::clock()) {}

  double wall_seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         wall_start_).count();
  }
  double cpu_seconds() const {
    return static_cast<double>(std::clock() - cpu_start_) / CLOCKS_PER_SEC;
  }

 private:
  std::chrono::steady_clock::time_point wall_start_;
  std::clock_t cpu_start_;
};

BenchmarkRecord parse_record_line(const std::string& line,
                                  const std::string& where) {
  nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    fail(ErrorKind::MalformedRecord, where + ": not a JSON object");
  }
  if (!doc.contains("arch") || !doc["arch"].is_string() ||
      !doc.contains("acc") || !doc["acc"].is_object()) {
    fail(ErrorKind::MalformedRecord,
         where + ": expected string 'arch' and object 'acc'");
  }
  BenchmarkRecord record;
  record.arch = doc["arch"].get<std::string>();
  try {
    archspec::parse_nb201_arch(record.arch);
  } catch (const Error& e) {
    fail(ErrorKind::InvalidArch, where + ": " + e.what());
  }
  for (const auto& [dataset, acc] : doc["acc"].items()) {
    if (!acc.is_object() || !acc.contains("val") || !acc.contains("test") ||
        !acc["val"].is_number() || !acc["test"].is_number()) {
      fail(ErrorKind::MalformedRecord,
           where + ": dataset '" + dataset + "' needs numeric val/test");
    }
    DatasetAccuracy da{acc["val"].get<double>(), acc["test"].get<double>()};
    if (!(da.val_acc >= 0.0 && da.val_acc <= 100.0) ||
        !(da.test_acc >= 0.0 && da.test_acc <= 100.0)) {
      fail(ErrorKind::AccuracyOutOfRange,
           where + ": dataset '" + dataset + "' accuracy outside [0, 100]");
    }
    record.accuracies[dataset] = da;
  }
  return record;
}

}  // namespace

std::vector<BenchmarkRecord> parse_benchmark(std::istream& in,
                                             const std::string& origin) {
  std::vector<BenchmarkRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    records.push_back(
        parse_record_line(line, origin + ":" + std::to_string(line_no)));
  }
  return records;
}

std::vector<BenchmarkRecord> load_benchmark(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open '" + path + "'");
  return parse_benchmark(in, path);
}

std::map<std::string, double> load_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open '" + path + "'");
  std::map<std::string, double> scores;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("arch") ||
        !doc["arch"].is_string() || !doc.contains("score") ||
        !doc["score"].is_number()) {
      fail(ErrorKind::MalformedRecord,
           where + ": expected {\"arch\": ..., \"score\": ...}");
    }
    scores[doc["arch"].get<std::string>()] = doc["score"].get<double>();
  }
  return scores;
}

namespace {

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

double score_one(const std::string& arch_text, const PipelineConfig& config) {
  const archspec::CellSpec cell = archspec::parse_nb201_arch(arch_text);
  const archspec::ArchitectureSpec arch =
      archspec::expand(cell, config.surrogate);
  return graphify::score_architecture(arch, config.measure, config.seeds);
}

}  // namespace

std::vector<double> score_records(std::span<const BenchmarkRecord> records,
                                  const PipelineConfig& config) {
  std::vector<double> scores(records.size(), 0.0);
  const int max_useful =
      static_cast<int>(std::max<std::size_t>(records.size(), 1));
  const int workers = std::min(resolve_jobs(config.jobs), max_useful);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= records.size()) return;
      try {
        scores[i] = score_one(records[i].arch, config);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(records.size());  // stop handing out work
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int t = 0; t < workers; ++t) threads.emplace_back(work);
    for (std::thread& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return scores;
}

ScoreReport run_score(const std::string& arch, const PipelineConfig& config) {
  StopwatchPair timer;
  ScoreReport report;
  report.arch = arch;
  report.config = config;

  const archspec::CellSpec cell = archspec::parse_nb201_arch(arch);
  const archspec::ArchitectureSpec spec =
      archspec::expand(cell, config.surrogate);
  if (config.seeds.empty()) {
    fail(ErrorKind::EmptyInput, "no conversion seeds given");
  }
  double total = 0.0;
  for (std::uint64_t s : config.seeds) {
    const std::uint64_t one[] = {s};
    const double v = graphify::score_architecture(spec, config.measure, one);
    report.per_seed.push_back(v);
    total += v;
  }
  report.score = total / static_cast<double>(config.seeds.size());
  report.wall_seconds = timer.wall_seconds();
  report.cpu_seconds = timer.cpu_seconds();
  return report;
}

std::string score_text(const ScoreReport& r) {
  std::string out;
  out += "arch:    " + r.arch + "\n";
  out += "measure: " + std::string(measures::to_string(r.config.measure)) +
         "  surrogate: (" + std::to_string(r.config.surrogate.channels) + ", " +
         std::to_string(r.config.surrogate.cells_per_module) + ", " +
         std::to_string(r.config.surrogate.modules) + ")\n";
  for (std::size_t i = 0; i < r.per_seed.size(); ++i) {
    out += "seed " + std::to_string(r.config.seeds[i]) + ": " +
           fmt("%.9g", r.per_seed[i]) + "\n";
  }
  out += "score: " + fmt("%.9g", r.score) + "\n";
  out += "wall_seconds: " + fmt("%.3f", r.wall_seconds) + "\n";
  return out;
}

std::string score_json(const ScoreReport& r) {
  nlohmann::json doc;
  doc["arch"] = r.arch;
  doc["measure"] = std::string(measures::to_string(r.config.measure));
  doc["surrogate"] = {{"channels", r.config.surrogate.channels},
                      {"cells_per_module", r.config.surrogate.cells_per_module},
                      {"modules", r.config.surrogate.modules},
                      {"probe_resolution", r.config.surrogate.probe_resolution}};
  doc["seeds"] = r.config.seeds;
  doc["per_seed"] = r.per_seed;
  doc["score"] = r.score;
  doc["wall_seconds"] = r.wall_seconds;
  return doc.dump(2) + "\n";
}

ConvertReport run_convert(const std::string& arch,
                          const archspec::SurrogateConfig& surrogate,
                          std::uint64_t seed, const std::string& format) {
  const archspec::CellSpec cell = archspec::parse_nb201_arch(arch);
  const archspec::ArchitectureSpec spec = archspec::expand(cell, surrogate);
  const graphify::ArchGraph g = graphify::convert(spec, seed);
  ConvertReport report;
  report.node_count = g.node_count;
  report.edge_count = g.edges.size();
  if (format == "tsv") {
    report.content = graphify::to_edge_list_tsv(g);
  } else if (format == "dot") {
    report.content = graphify::to_dot(g);
  } else {
    fail(ErrorKind::MalformedEncoding,
         "unknown graph format '" + format + "' (want tsv or dot)");
  }
  return report;
}

namespace {

const DatasetAccuracy& accuracy_for(const BenchmarkRecord& record,
                                    const std::string& dataset,
                                    std::size_t index) {
  const auto it = record.accuracies.find(dataset);
  if (it == record.accuracies.end()) {
    fail(ErrorKind::UnknownDataset,
         "record " + std::to_string(index + 1) + " has no dataset '" +
             dataset + "'");
  }
  return it->second;
}

}  // namespace

CorrelateReport run_correlate(const std::string& bench_path,
                              const std::string& dataset,
                              const PipelineConfig& config) {
  StopwatchPair timer;
  const std::vector<BenchmarkRecord> records = load_benchmark(bench_path);
  if (records.empty()) {
    fail(ErrorKind::MalformedRecord, bench_path + ": benchmark is empty");
  }

  CorrelateReport report;
  report.dataset = dataset;
  report.config = config;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const DatasetAccuracy& acc = accuracy_for(records[i], dataset, i);
    report.archs.push_back(records[i].arch);
    report.val_accs.push_back(acc.val_acc);
    report.test_accs.push_back(acc.test_acc);
  }
  report.scores = score_records(records, config);
  report.rank_score = ranker::rank_with_ties(report.scores);
  report.rank_acc = ranker::rank_with_ties(report.test_accs);
  report.rho_val = ranker::spearman_rho(report.scores, report.val_accs);
  report.tau_val = ranker::kendall_tau(report.scores, report.val_accs);
  report.rho_test = ranker::spearman_rho(report.scores, report.test_accs);
  report.tau_test = ranker::kendall_tau(report.scores, report.test_accs);
  report.wall_seconds = timer.wall_seconds();
  report.cpu_seconds = timer.cpu_seconds();
  return report;
}

std::string correlate_csv(const CorrelateReport& r) {
  std::string out = "arch,score,val_acc,test_acc,rank_score,rank_acc\n";
  for (std::size_t i = 0; i < r.archs.size(); ++i) {
    out += r.archs[i];
    out += ',' + fmt("%.9g", r.scores[i]);
    out += ',' + fmt("%.6g", r.val_accs[i]);
    out += ',' + fmt("%.6g", r.test_accs[i]);
    out += ',' + fmt("%g", r.rank_score[i]);
    out += ',' + fmt("%g", r.rank_acc[i]);
    out += '\n';
  }
  return out;
}

std::string correlate_text(const CorrelateReport& r) {
  std::string out;
  out += "dataset: " + r.dataset + "  records: " +
         std::to_string(r.archs.size()) + "\n";
  out += "measure: " + std::string(measures::to_string(r.config.measure)) +
         "  surrogate: (" + std::to_string(r.config.surrogate.channels) + ", " +
         std::to_string(r.config.surrogate.cells_per_module) + ", " +
         std::to_string(r.config.surrogate.modules) + ")  seeds: " +
         std::to_string(r.config.seeds.size()) + "\n";
  out += "spearman_rho (val):  " + fmt("%.4f", r.rho_val) + "\n";
  out += "kendall_tau  (val):  " + fmt("%.4f", r.tau_val) + "\n";
  out += "spearman_rho (test): " + fmt("%.4f", r.rho_test) + "\n";
  out += "kendall_tau  (test): " + fmt("%.4f", r.tau_test) + "\n";
  out += "wall_seconds: " + fmt("%.3f", r.wall_seconds) +
         "  cpu_seconds: " + fmt("%.3f", r.cpu_seconds) + "\n";
  return out;
}

SearchReport run_search(const std::string& bench_path,
                        const std::string& dataset,
                        std::optional<measures::MeasureKind> measure,
                        const PipelineConfig& config, int n_samples,
                        int trials, std::uint64_t seed) {
  StopwatchPair timer;
  const std::vector<BenchmarkRecord> records = load_benchmark(bench_path);

  SearchReport report;
  report.dataset = dataset;
  report.n_samples = n_samples;
  report.trials = trials;

  std::vector<search::PoolEntry> pool(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const DatasetAccuracy& acc = accuracy_for(records[i], dataset, i);
    pool[i] = {records[i].arch, 0.0, acc.val_acc, acc.test_acc};
  }

  if (measure.has_value()) {
    report.metric_name = std::string(measures::to_string(*measure));
    PipelineConfig scoring = config;
    scoring.measure = *measure;
    const std::vector<double> scores = score_records(records, scoring);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i].metric = scores[i];
    report.summary = search::repeated_trials(pool, n_samples, trials, seed);
  } else {
    // Ground-truth mode: per-split oracle on identical subsets (the subset
    // drawn for trial t depends only on the seed, not the metric).
    report.metric_name = "gt";
    for (auto& e : pool) e.metric = e.val_acc;
    const search::TrialSummary by_val =
        search::repeated_trials(pool, n_samples, trials, seed);
    for (auto& e : pool) e.metric = e.test_acc;
    const search::TrialSummary by_test =
        search::repeated_trials(pool, n_samples, trials, seed);
    report.summary.chosen_val = by_val.chosen_val;
    report.summary.gt_val = by_val.gt_val;
    report.summary.chosen_test = by_test.chosen_test;
    report.summary.gt_test = by_test.gt_test;
  }
  report.wall_seconds = timer.wall_seconds();
  report.cpu_seconds = timer.cpu_seconds();
  return report;
}

namespace {

std::string stats_row(const char* label, const search::TrialStats& s) {
  std::string out = label;
  out += fmt("%.2f", s.mean) + " +/- " + fmt("%.2f", s.stddev) + "\n";
  return out;
}

}  // namespace

std::string search_text(const SearchReport& r) {
  std::string out;
  out += "dataset: " + r.dataset + "  metric: " + r.metric_name + "  N: " +
         std::to_string(r.n_samples) + "  trials: " +
         std::to_string(r.trials) + "\n";
  out += stats_row("chosen val:  ", r.summary.chosen_val);
  out += stats_row("chosen test: ", r.summary.chosen_test);
  out += stats_row("gt val:      ", r.summary.gt_val);
  out += stats_row("gt test:     ", r.summary.gt_test);
  out += "wall_seconds: " + fmt("%.3f", r.wall_seconds) +
         "  cpu_seconds: " + fmt("%.3f", r.cpu_seconds) + "\n";
  return out;
}

BiasRunReport run_bias(const std::string& bench_path,
                       const std::string& dataset,
                       const PipelineConfig& config, double top_fraction,
                       const std::optional<std::string>& scores_path) {
  const std::vector<BenchmarkRecord> records = load_benchmark(bench_path);
  if (records.empty()) {
    fail(ErrorKind::MalformedRecord, bench_path + ": benchmark is empty");
  }

  std::vector<std::string> ids(records.size());
  std::vector<double> gt_scores(records.size());
  std::map<std::string, archspec::CellSpec> cells;
  for (std::size_t i = 0; i < records.size(); ++i) {
    ids[i] = records[i].arch;
    gt_scores[i] = accuracy_for(records[i], dataset, i).test_acc;
    cells[ids[i]] = archspec::parse_nb201_arch(ids[i]);
  }

  BiasRunReport report;
  report.dataset = dataset;
  report.top_fraction = top_fraction;

  std::vector<double> metric_scores(records.size());
  if (scores_path.has_value()) {
    report.metric_name = "external";
    const std::map<std::string, double> external = load_scores(*scores_path);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto it = external.find(ids[i]);
      if (it == external.end()) {
        fail(ErrorKind::MismatchedUniverse,
             "score file lacks architecture '" + ids[i] + "'");
      }
      metric_scores[i] = it->second;
    }
  } else {
    report.metric_name = std::string(measures::to_string(config.measure));
    metric_scores = score_records(records, config);
  }

  const ranker::RankTable metric_table =
      ranker::make_rank_table(ids, metric_scores);
  const ranker::RankTable gt_table = ranker::make_rank_table(ids, gt_scores);
  report.bias = ranker::operation_bias(metric_table, gt_table, cells,
                                       top_fraction);
  return report;
}

std::string bias_text(const BiasRunReport& r) {
  std::string out;
  out += "dataset: " + r.dataset + "  metric: " + r.metric_name +
         "  top_fraction: " + fmt("%g", r.top_fraction) + "  selected: " +
         std::to_string(r.bias.selected_count) + "\n";
  out += "operation      metric_freq  gt_freq  |diff|\n";
  for (int i = 0; i < archspec::kOperationCount; ++i) {
    const auto op = static_cast<archspec::OperationKind>(i);
    char row[128];
    std::snprintf(row, sizeof(row), "%-14s %11.4f %8.4f %7.4f\n",
                  std::string(archspec::to_string(op)).c_str(),
                  r.bias.metric_freq[i], r.bias.gt_freq[i],
                  std::abs(r.bias.metric_freq[i] - r.bias.gt_freq[i]));
    out += row;
  }
  out += "bias: " + fmt("%.4f", r.bias.bias) + "\n";
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) fail(ErrorKind::IoError, "write to '" + path + "' failed");
}

}  // namespace nasgraph::harness
