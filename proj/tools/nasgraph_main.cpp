// nasgraph: convert cell-based architectures to graphs and rank them by
// graph measures. Subcommands: score, convert, correlate, search, bias.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nasgraph/error.hpp"
#include "nasgraph/harness.hpp"

namespace {

using nasgraph::harness::PipelineConfig;

struct CommonFlags {
  int channels = 16;
  int cells = 1;
  int modules = 3;
  int probe_resolution = 32;
  std::vector<std::uint64_t> seeds;
  int jobs = 0;
  std::string measure = "avg_deg";
};

void add_surrogate_flags(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("-h,--channels", flags->channels, "surrogate channel count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("-c,--cells", flags->cells, "cells per module")
      ->check(CLI::PositiveNumber);
  cmd->add_option("-m,--modules", flags->modules, "module count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--probe-res", flags->probe_resolution,
                  "stem input resolution")
      ->check(CLI::PositiveNumber);
}

void add_seeds_flag(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--seeds", flags->seeds,
                  "conversion seeds (repeatable; default 0..7)");
}

void add_jobs_flag(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--jobs", flags->jobs,
                  "worker threads (default: logical CPUs)")
      ->envname("NASGRAPH_JOBS");
}

PipelineConfig make_config(const CommonFlags& flags) {
  PipelineConfig config;
  config.surrogate.channels = flags.channels;
  config.surrogate.cells_per_module = flags.cells;
  config.surrogate.modules = flags.modules;
  config.surrogate.probe_resolution = flags.probe_resolution;
  if (!flags.seeds.empty()) config.seeds = flags.seeds;
  config.jobs = flags.jobs;
  if (flags.measure != "gt") {
    config.measure = nasgraph::measures::measure_from_name(flags.measure);
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph-measure scoring and search for cell-based NAS spaces"};
  app.set_help_flag("--help", "print help");  // frees -h for --channels
  app.require_subcommand(1);

  CommonFlags flags;
  std::string arch, bench, dataset = "cifar10", out_path, format = "tsv";
  std::string scores_path;
  std::uint64_t seed = 0;
  int n_samples = 100, trials = 100;
  double top_fraction = 0.10;
  bool as_json = false;

  CLI::App* score = app.add_subcommand("score", "score one architecture");
  score->add_option("--arch", arch, "NB201-style encoding")->required();
  add_surrogate_flags(score, &flags);
  add_seeds_flag(score, &flags);
  score->add_option("--measure", flags.measure,
                    "avg_deg|density|resilience|wedge");
  score->add_flag("--json", as_json, "emit JSON instead of text");
  score->add_option("--out", out_path, "write output to file");

  CLI::App* convert = app.add_subcommand("convert", "export the graph");
  convert->add_option("--arch", arch, "NB201-style encoding")->required();
  add_surrogate_flags(convert, &flags);
  convert->add_option("--seed", seed, "conversion seed");
  convert->add_option("--format", format, "tsv|dot");
  convert->add_option("--out", out_path, "write output to file");

  CLI::App* correlate =
      app.add_subcommand("correlate", "rank a benchmark and correlate");
  correlate->add_option("--bench", bench, "benchmark JSONL path")->required();
  correlate->add_option("--dataset", dataset, "dataset key in the records");
  correlate->add_option("--measure", flags.measure,
                        "avg_deg|density|resilience|wedge");
  add_surrogate_flags(correlate, &flags);
  add_seeds_flag(correlate, &flags);
  add_jobs_flag(correlate, &flags);
  correlate->add_option("--out", out_path, "write per-architecture CSV");

  CLI::App* search = app.add_subcommand("search", "repeated random search");
  search->add_option("--bench", bench, "benchmark JSONL path")->required();
  search->add_option("--dataset", dataset, "dataset key in the records");
  search->add_option("--measure", flags.measure,
                     "avg_deg|density|resilience|wedge|gt");
  search->add_option("--n", n_samples, "architectures sampled per trial");
  search->add_option("--trials", trials, "number of trials");
  search->add_option("--seed", seed, "base seed (trial t uses seed + t)");
  add_surrogate_flags(search, &flags);
  add_seeds_flag(search, &flags);
  add_jobs_flag(search, &flags);

  CLI::App* bias = app.add_subcommand("bias", "operation bias vs ground truth");
  bias->add_option("--bench", bench, "benchmark JSONL path")->required();
  bias->add_option("--dataset", dataset, "dataset key in the records");
  bias->add_option("--measure", flags.measure,
                   "avg_deg|density|resilience|wedge");
  bias->add_option("--scores", scores_path,
                   "external metric scores (JSONL arch/score)");
  bias->add_option("--top", top_fraction, "selected fraction");
  add_surrogate_flags(bias, &flags);
  add_seeds_flag(bias, &flags);
  add_jobs_flag(bias, &flags);

  CLI11_PARSE(app, argc, argv);

  try {
    const PipelineConfig config = make_config(flags);

    if (score->parsed()) {
      const auto report = nasgraph::harness::run_score(arch, config);
      const std::string text = as_json
                                   ? nasgraph::harness::score_json(report)
                                   : nasgraph::harness::score_text(report);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        nasgraph::harness::write_file(out_path, text);
      }
    } else if (convert->parsed()) {
      const auto report = nasgraph::harness::run_convert(
          arch, config.surrogate, seed, format);
      if (out_path.empty()) {
        std::cout << report.content;
      } else {
        nasgraph::harness::write_file(out_path, report.content);
        std::cout << "nodes: " << report.node_count
                  << "  edges: " << report.edge_count << "  wrote "
                  << out_path << "\n";
      }
    } else if (correlate->parsed()) {
      const auto report =
          nasgraph::harness::run_correlate(bench, dataset, config);
      std::cout << nasgraph::harness::correlate_text(report);
      if (!out_path.empty()) {
        nasgraph::harness::write_file(
            out_path, nasgraph::harness::correlate_csv(report));
      }
    } else if (search->parsed()) {
      std::optional<nasgraph::measures::MeasureKind> measure;
      if (flags.measure != "gt") measure = config.measure;
      const auto report = nasgraph::harness::run_search(
          bench, dataset, measure, config, n_samples, trials, seed);
      std::cout << nasgraph::harness::search_text(report);
    } else if (bias->parsed()) {
      std::optional<std::string> scores;
      if (!scores_path.empty()) scores = scores_path;
      const auto report = nasgraph::harness::run_bias(bench, dataset, config,
                                                      top_fraction, scores);
      std::cout << nasgraph::harness::bias_text(report);
    }
  } catch (const nasgraph::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
