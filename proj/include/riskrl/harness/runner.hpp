#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "riskrl/agent.hpp"
#include "riskrl/harness/config.hpp"

namespace riskrl::harness {

// One evaluation point of a training run.
struct EvalRow {
  std::uint64_t seed = 0;
  std::uint64_t train_step = 0;
  double mean_eval_return = 0.0;
  double win_rate = 0.0;
  double mean_damage_dealt_per_step = 0.0;
  double mean_travel_distance_per_step = 0.0;
  double alpha = 0.0;
  double beta = 1.0;
  double epsilon = 0.0;

  bool operator==(const EvalRow&) const = default;
};

struct RunResult {
  std::vector<EvalRow> rows;  // ordered by (seed, train_step)
};

// Output of a single seed's training loop; checkpoints carry one table per
// agent slot.
struct SeedOutcome {
  std::uint64_t seed = 0;
  std::vector<EvalRow> rows;
  std::vector<QuantileTable> tables;
};

// Trains one seed to completion. Deterministic in (cfg, seed).
SeedOutcome run_seed(const ExperimentConfig& cfg, std::uint64_t seed);

// Trains every configured seed (seeds are independent workers, OpenMP when
// cfg.threads != 1), merges rows by (seed, train_step), and writes
// <out_dir>/<env>_<risk_mode>.csv, a .meta config echo, and per-seed .table
// checkpoints. Byte-reproducible for a fixed config.
RunResult run_experiment(const ExperimentConfig& cfg);

std::string csv_path(const ExperimentConfig& cfg);
std::string meta_path(const ExperimentConfig& cfg);
std::string checkpoint_path(const ExperimentConfig& cfg, std::uint64_t seed);

void write_csv(const RunResult& result, std::ostream& out);
RunResult read_csv(std::istream& in);
RunResult read_csv_file(const std::string& path);

void save_checkpoint(const std::vector<QuantileTable>& tables, const std::string& path);
std::vector<QuantileTable> load_checkpoint(const std::string& path);

// RFC-4180 style field quoting (quotes fields containing commas, quotes or
// newlines; doubles embedded quotes).
std::string csv_escape(const std::string& field);

struct SummaryRow {
  std::string env;
  std::string risk_mode;
  int num_seeds = 0;
  double final_return_mean = 0.0;
  double final_return_median = 0.0;
  double final_return_min = 0.0;
  double final_return_max = 0.0;
  double final_win_rate_mean = 0.0;
  double final_win_rate_median = 0.0;
  double final_win_rate_min = 0.0;
  double final_win_rate_max = 0.0;
};

// Aggregates final-evaluation rows per (env, risk mode). Each CSV must have a
// sibling .meta file naming its env and risk_mode.
std::vector<SummaryRow> summarize(const std::vector<std::string>& csv_paths);

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);
std::string format_summary_table(const std::vector<SummaryRow>& rows);

double median(std::vector<double> values);

}  // namespace riskrl::harness
