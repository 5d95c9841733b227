#include "riskrl/harness/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "riskrl/envs/team_battle.hpp"
#include "riskrl/envs/variance_bandit.hpp"
#include "riskrl/harness/trainer.hpp"

namespace riskrl::harness {

namespace {

// rng stream ids per seed
constexpr std::uint64_t kActionStream = 1;
constexpr std::uint64_t kEnvStream = 2;
constexpr std::uint64_t kEvalStream = 3;

std::uint64_t episode_seed(std::uint64_t seed, std::uint64_t episode) {
  return derive_seed(derive_seed(seed, kEnvStream), episode);
}

std::uint64_t eval_episode_seed(std::uint64_t seed, std::uint64_t eval_index,
                                std::uint64_t episode) {
  return derive_seed(derive_seed(derive_seed(seed, kEvalStream), eval_index), episode);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

EvalRow eval_bandit(const QuantileTable& table, const ExperimentConfig& cfg,
                    const envs::VarianceBandit& bandit, std::uint64_t seed,
                    std::uint64_t eval_index) {
  const RiskInterval target = cfg.eval_interval_policy();
  std::vector<int> legal(static_cast<std::size_t>(bandit.num_arms()));
  for (int a = 0; a < bandit.num_arms(); ++a) legal[static_cast<std::size_t>(a)] = a;

  double total_return = 0.0;
  Rng greedy_rng(0);  // never consumed at epsilon = 0
  for (int ep = 0; ep < cfg.eval_episodes; ++ep) {
    Rng reward_rng(eval_episode_seed(seed, eval_index, static_cast<std::uint64_t>(ep)));
    const int arm = act(table, 0, legal, target, 0.0, greedy_rng);
    total_return += bandit.step(arm, reward_rng);
  }

  EvalRow row;
  row.mean_eval_return = total_return / cfg.eval_episodes;
  return row;
}

SeedOutcome run_bandit_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  const envs::VarianceBandit bandit = envs::VarianceBandit::default_instance();
  const RiskSchedule schedule = cfg.risk_schedule();
  const EpsilonSchedule eps_schedule = cfg.epsilon_schedule();
  LearnerConfig learner = cfg.learner_config();

  QuantileTable table(cfg.num_quantiles, bandit.num_arms(), 0.0);
  std::vector<int> legal(static_cast<std::size_t>(bandit.num_arms()));
  for (int a = 0; a < bandit.num_arms(); ++a) legal[static_cast<std::size_t>(a)] = a;

  Rng action_rng(derive_seed(seed, kActionStream));
  Rng env_rng(derive_seed(seed, kEnvStream));

  SeedOutcome outcome;
  outcome.seed = seed;
  std::uint64_t eval_index = 0;
  for (std::uint64_t t = 0; t < cfg.total_steps; ++t) {
    const RiskInterval interval = interval_at_step(schedule, t);
    learner.lr = cfg.lr_at_step(t);
    if (cfg.bootstrap == "scheduled") learner.bootstrap_interval = interval;
    const double epsilon = epsilon_at_step(eps_schedule, t);

    const int arm = act(table, 0, legal, interval, epsilon, action_rng);
    const double reward = bandit.step(arm, env_rng);
    Transition transition;
    transition.state = 0;
    transition.action = arm;
    transition.reward = reward;
    transition.terminal = true;
    qr_update(table, transition, learner);

    const std::uint64_t step = t + 1;
    if (step % cfg.eval_interval == 0) {
      EvalRow row = eval_bandit(table, cfg, bandit, seed, eval_index++);
      row.seed = seed;
      row.train_step = step;
      const RiskInterval logged = interval_at_step(schedule, step);
      row.alpha = logged.alpha;
      row.beta = logged.beta;
      row.epsilon = epsilon_at_step(eps_schedule, step);
      outcome.rows.push_back(row);
    }
  }
  outcome.tables.push_back(std::move(table));
  return outcome;
}

EvalRow eval_battle(const std::vector<QuantileTable>& tables, const ExperimentConfig& cfg,
                    const envs::BattlePreset& preset, std::uint64_t seed,
                    std::uint64_t eval_index) {
  const RiskInterval target = cfg.eval_interval_policy();
  envs::TeamBattleEnv env(preset);
  std::vector<int> legal(envs::kNumBattleActions);
  for (int a = 0; a < envs::kNumBattleActions; ++a) legal[static_cast<std::size_t>(a)] = a;

  double total_return = 0.0;
  double total_damage = 0.0;
  double total_travel = 0.0;
  std::uint64_t total_steps = 0;
  int wins = 0;
  Rng greedy_rng(0);  // never consumed at epsilon = 0

  for (int ep = 0; ep < cfg.eval_episodes; ++ep) {
    env.reset(eval_episode_seed(seed, eval_index, static_cast<std::uint64_t>(ep)));
    envs::StepMetrics last{};
    while (!env.terminal()) {
      const envs::Observation& obs = env.observation();
      std::vector<int> joint(static_cast<std::size_t>(preset.num_agents),
                             static_cast<int>(envs::BattleAction::stay));
      for (int i = 0; i < preset.num_agents; ++i) {
        if (!obs.agents[static_cast<std::size_t>(i)].alive()) continue;
        const StateKey key = envs::TeamBattleEnv::agent_state_key(obs, i, preset);
        joint[static_cast<std::size_t>(i)] =
            act(tables[static_cast<std::size_t>(i)], key, legal, target, 0.0, greedy_rng);
      }
      const envs::StepResult sr = env.step(joint);
      last = sr.metrics;
      total_damage += sr.metrics.damage_dealt;
      total_travel += sr.metrics.travel_distance;
      ++total_steps;
    }
    total_return += last.episode_return;
    if (env.win()) ++wins;
  }

  EvalRow row;
  row.mean_eval_return = total_return / cfg.eval_episodes;
  row.win_rate = static_cast<double>(wins) / cfg.eval_episodes;
  row.mean_damage_dealt_per_step = total_damage / static_cast<double>(total_steps);
  row.mean_travel_distance_per_step = total_travel / static_cast<double>(total_steps);
  return row;
}

SeedOutcome run_battle_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  const envs::BattlePreset preset = envs::preset_by_name(cfg.env);
  const RiskSchedule schedule = cfg.risk_schedule();
  const EpsilonSchedule eps_schedule = cfg.epsilon_schedule();
  LearnerConfig learner = cfg.learner_config();

  std::vector<QuantileTable> tables(
      static_cast<std::size_t>(preset.num_agents),
      QuantileTable(cfg.num_quantiles, envs::kNumBattleActions, 0.0));
  std::vector<int> legal(envs::kNumBattleActions);
  for (int a = 0; a < envs::kNumBattleActions; ++a) legal[static_cast<std::size_t>(a)] = a;

  Rng action_rng(derive_seed(seed, kActionStream));
  envs::TeamBattleEnv env(preset);
  std::uint64_t episode = 0;
  env.reset(episode_seed(seed, episode));

  SeedOutcome outcome;
  outcome.seed = seed;
  std::uint64_t eval_index = 0;

  for (std::uint64_t t = 0; t < cfg.total_steps; ++t) {
    const RiskInterval interval = interval_at_step(schedule, t);
    learner.lr = cfg.lr_at_step(t);
    if (cfg.bootstrap == "scheduled") learner.bootstrap_interval = interval;
    const double epsilon = epsilon_at_step(eps_schedule, t);

    const envs::Observation& obs = env.observation();
    JointTransition transition;
    std::vector<int> joint(static_cast<std::size_t>(preset.num_agents),
                           static_cast<int>(envs::BattleAction::stay));
    for (int i = 0; i < preset.num_agents; ++i) {
      if (!obs.agents[static_cast<std::size_t>(i)].alive()) continue;
      const StateKey key = envs::TeamBattleEnv::agent_state_key(obs, i, preset);
      const int action =
          act(tables[static_cast<std::size_t>(i)], key, legal, interval, epsilon, action_rng);
      transition.actors.push_back({i, key, action});
      joint[static_cast<std::size_t>(i)] = action;
    }

    const envs::StepResult sr = env.step(joint);
    transition.reward = sr.reward;
    transition.terminal = sr.terminal;
    if (!sr.terminal) {
      const envs::Observation& next_obs = env.observation();
      for (int i = 0; i < preset.num_agents; ++i) {
        if (!next_obs.agents[static_cast<std::size_t>(i)].alive()) continue;
        transition.successors.push_back(
            {i, envs::TeamBattleEnv::agent_state_key(next_obs, i, preset), legal});
      }
    }
    joint_qr_update(tables, transition, learner);

    if (sr.terminal) {
      ++episode;
      env.reset(episode_seed(seed, episode));
    }

    const std::uint64_t step = t + 1;
    if (step % cfg.eval_interval == 0) {
      EvalRow row = eval_battle(tables, cfg, preset, seed, eval_index++);
      row.seed = seed;
      row.train_step = step;
      const RiskInterval logged = interval_at_step(schedule, step);
      row.alpha = logged.alpha;
      row.beta = logged.beta;
      row.epsilon = epsilon_at_step(eps_schedule, step);
      outcome.rows.push_back(row);
    }
  }
  outcome.tables = std::move(tables);
  return outcome;
}

}  // namespace

SeedOutcome run_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.env == "bandit") return run_bandit_seed(cfg, seed);
  return run_battle_seed(cfg, seed);
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);

  const std::size_t num_seeds = cfg.seeds.size();
  std::vector<SeedOutcome> outcomes(num_seeds);
  std::vector<std::exception_ptr> errors(num_seeds);

#ifdef _OPENMP
  const int requested = cfg.threads == 0 ? omp_get_max_threads() : cfg.threads;
#else
  const int requested = 1;
#endif

  if (requested <= 1) {
    for (std::size_t k = 0; k < num_seeds; ++k) outcomes[k] = run_seed(cfg, cfg.seeds[k]);
  } else {
#pragma omp parallel for schedule(dynamic) num_threads(requested)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(num_seeds); ++k) {
      try {
        outcomes[static_cast<std::size_t>(k)] =
            run_seed(cfg, cfg.seeds[static_cast<std::size_t>(k)]);
      } catch (...) {
        errors[static_cast<std::size_t>(k)] = std::current_exception();
      }
    }
    for (const auto& error : errors)
      if (error) std::rethrow_exception(error);
  }

  RunResult result;
  for (const auto& outcome : outcomes)
    result.rows.insert(result.rows.end(), outcome.rows.begin(), outcome.rows.end());
  std::stable_sort(result.rows.begin(), result.rows.end(), [](const EvalRow& a, const EvalRow& b) {
    return a.seed != b.seed ? a.seed < b.seed : a.train_step < b.train_step;
  });

  {
    const std::string path = csv_path(cfg);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open CSV for writing: " + path);
    write_csv(result, out);
    if (!out) throw std::runtime_error("failed writing CSV: " + path);
  }
  {
    const std::string path = meta_path(cfg);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open meta file for writing: " + path);
    out << "# run metadata; evaluation uses epsilon = 0 and the schedule's target interval\n";
    out << cfg.to_key_values();
    if (!out) throw std::runtime_error("failed writing meta file: " + path);
  }
  if (cfg.write_checkpoints) {
    for (const auto& outcome : outcomes)
      save_checkpoint(outcome.tables, checkpoint_path(cfg, outcome.seed));
  }
  return result;
}

std::string csv_path(const ExperimentConfig& cfg) {
  return cfg.out_dir + "/" + cfg.run_basename() + ".csv";
}

std::string meta_path(const ExperimentConfig& cfg) {
  return cfg.out_dir + "/" + cfg.run_basename() + ".meta";
}

std::string checkpoint_path(const ExperimentConfig& cfg, std::uint64_t seed) {
  return cfg.out_dir + "/" + cfg.run_basename() + "_seed" + std::to_string(seed) + ".table";
}

void write_csv(const RunResult& result, std::ostream& out) {
  out << "seed,train_step,mean_eval_return,win_rate,mean_damage_dealt_per_step,"
         "mean_travel_distance_per_step,alpha,beta,epsilon\n";
  for (const EvalRow& row : result.rows) {
    out << row.seed << "," << row.train_step << "," << format_double(row.mean_eval_return) << ","
        << format_double(row.win_rate) << "," << format_double(row.mean_damage_dealt_per_step)
        << "," << format_double(row.mean_travel_distance_per_step) << ","
        << format_double(row.alpha) << "," << format_double(row.beta) << ","
        << format_double(row.epsilon) << "\n";
  }
}

RunResult read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("run CSV: missing header");
  RunResult result;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9) throw std::runtime_error("run CSV: malformed row '" + line + "'");
    EvalRow row;
    row.seed = std::stoull(fields[0]);
    row.train_step = std::stoull(fields[1]);
    row.mean_eval_return = std::stod(fields[2]);
    row.win_rate = std::stod(fields[3]);
    row.mean_damage_dealt_per_step = std::stod(fields[4]);
    row.mean_travel_distance_per_step = std::stod(fields[5]);
    row.alpha = std::stod(fields[6]);
    row.beta = std::stod(fields[7]);
    row.epsilon = std::stod(fields[8]);
    result.rows.push_back(row);
  }
  return result;
}

RunResult read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open run CSV: " + path);
  return read_csv(in);
}

void save_checkpoint(const std::vector<QuantileTable>& tables, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  out << "riskrl-checkpoint v1\n";
  out << "tables " << tables.size() << "\n";
  for (const auto& table : tables) table.save(out);
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

std::vector<QuantileTable> load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::string magic, version, keyword;
  in >> magic >> version >> keyword;
  std::size_t count = 0;
  in >> count;
  if (!in || magic != "riskrl-checkpoint" || version != "v1" || keyword != "tables")
    throw std::runtime_error("unrecognized checkpoint header: " + path);
  std::vector<QuantileTable> tables;
  tables.reserve(count);
  for (std::size_t i = 0; i < count; ++i) tables.push_back(QuantileTable::load(in));
  return tables;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

std::map<std::string, std::string> read_meta_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open meta file: " + path);
  std::map<std::string, std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r\n");
      return s.substr(b, e - b + 1);
    };
    entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return entries;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<std::string>& csv_paths) {
  if (csv_paths.empty()) throw std::invalid_argument("summarize: need at least one CSV");

  struct Finals {
    std::vector<double> returns;
    std::vector<double> win_rates;
  };
  std::map<std::pair<std::string, std::string>, Finals> groups;

  for (const std::string& path : csv_paths) {
    std::string meta = path;
    const auto dot = meta.rfind(".csv");
    if (dot != std::string::npos) meta = meta.substr(0, dot);
    meta += ".meta";
    const auto entries = read_meta_file(meta);
    const auto env_it = entries.find("env");
    const auto mode_it = entries.find("risk_mode");
    if (env_it == entries.end() || mode_it == entries.end())
      throw std::runtime_error("meta file missing env/risk_mode: " + meta);

    const RunResult result = read_csv_file(path);
    std::map<std::uint64_t, EvalRow> final_rows;
    for (const EvalRow& row : result.rows) {
      auto [it, inserted] = final_rows.try_emplace(row.seed, row);
      if (!inserted && row.train_step > it->second.train_step) it->second = row;
    }
    auto& finals = groups[{env_it->second, mode_it->second}];
    for (const auto& [seed, row] : final_rows) {
      finals.returns.push_back(row.mean_eval_return);
      finals.win_rates.push_back(row.win_rate);
    }
  }

  std::vector<SummaryRow> rows;
  for (const auto& [key, finals] : groups) {
    SummaryRow row;
    row.env = key.first;
    row.risk_mode = key.second;
    row.num_seeds = static_cast<int>(finals.returns.size());
    auto mean = [](const std::vector<double>& v) {
      double acc = 0.0;
      for (double x : v) acc += x;
      return acc / static_cast<double>(v.size());
    };
    row.final_return_mean = mean(finals.returns);
    row.final_return_median = median(finals.returns);
    row.final_return_min = *std::min_element(finals.returns.begin(), finals.returns.end());
    row.final_return_max = *std::max_element(finals.returns.begin(), finals.returns.end());
    row.final_win_rate_mean = mean(finals.win_rates);
    row.final_win_rate_median = median(finals.win_rates);
    row.final_win_rate_min = *std::min_element(finals.win_rates.begin(), finals.win_rates.end());
    row.final_win_rate_max = *std::max_element(finals.win_rates.begin(), finals.win_rates.end());
    rows.push_back(row);
  }
  return rows;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << "env,risk_mode,num_seeds,final_return_mean,final_return_median,final_return_min,"
         "final_return_max,final_win_rate_mean,final_win_rate_median,final_win_rate_min,"
         "final_win_rate_max\n";
  for (const SummaryRow& row : rows) {
    out << csv_escape(row.env) << "," << csv_escape(row.risk_mode) << "," << row.num_seeds << ","
        << format_double(row.final_return_mean) << "," << format_double(row.final_return_median)
        << "," << format_double(row.final_return_min) << ","
        << format_double(row.final_return_max) << "," << format_double(row.final_win_rate_mean)
        << "," << format_double(row.final_win_rate_median) << ","
        << format_double(row.final_win_rate_min) << "," << format_double(row.final_win_rate_max)
        << "\n";
  }
}

std::string format_summary_table(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-10s %-15s %5s %12s %12s %12s %12s %9s %9s\n", "env",
                "risk_mode", "seeds", "ret_mean", "ret_median", "ret_min", "ret_max", "win_mean",
                "win_med");
  out << line;
  for (const SummaryRow& row : rows) {
    std::snprintf(line, sizeof(line), "%-10s %-15s %5d %12.4f %12.4f %12.4f %12.4f %9.4f %9.4f\n",
                  row.env.c_str(), row.risk_mode.c_str(), row.num_seeds, row.final_return_mean,
                  row.final_return_median, row.final_return_min, row.final_return_max,
                  row.final_win_rate_mean, row.final_win_rate_median);
    out << line;
  }
  return out.str();
}

}  // namespace riskrl::harness
