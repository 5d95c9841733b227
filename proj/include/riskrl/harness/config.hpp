#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riskrl/agent.hpp"
#include "riskrl/risk.hpp"

namespace riskrl::harness {

// Flat key=value experiment configuration; every key can also be set from
// the CLI. See README for the key reference.
struct ExperimentConfig {
  std::string env = "kiting";  // kiting | focusfire | bandit
  std::string risk_mode = "sched-neutral";
  // static-averse | static-neutral | static-seeking | sched-averse | sched-neutral
  std::uint64_t schedule_steps = 10'000;
  double eps_start = 1.0;
  double eps_end = 0.05;
  std::uint64_t eps_steps = 10'000;
  double gamma = 0.95;
  double lr = 0.1;
  double lr_end = -1.0;  // < 0 keeps lr constant; otherwise linear decay to lr_end
  double kappa = 1.0;
  int num_quantiles = 8;
  std::string bootstrap = "neutral";  // neutral | scheduled
  std::uint64_t total_steps = 30'000;
  std::uint64_t eval_interval = 1'500;
  int eval_episodes = 24;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::string out_dir = "out";
  int threads = 0;  // 0 = OpenMP default
  bool write_checkpoints = true;

  void validate() const;

  void set(const std::string& key, const std::string& value);

  static ExperimentConfig from_file(const std::string& path);

  // key=value dump, one per line, parseable by set(); used for .meta files
  std::string to_key_values() const;

  RiskSchedule risk_schedule() const;
  EpsilonSchedule epsilon_schedule() const;
  RiskInterval eval_interval_policy() const;  // target interval, used with eps = 0
  LearnerConfig learner_config() const;
  double lr_at_step(std::uint64_t t) const;

  std::string run_basename() const;  // "<env>_<risk_mode>"
};

std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace riskrl::harness
