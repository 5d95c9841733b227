// Experiment CLI: train/evaluate (run), aggregate results (summarize), and
// replay checkpointed policies (demo).
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "riskrl/envs/team_battle.hpp"
#include "riskrl/envs/variance_bandit.hpp"
#include "riskrl/harness/config.hpp"
#include "riskrl/harness/runner.hpp"

using namespace riskrl;
using namespace riskrl::harness;

namespace {

RiskInterval parse_interval(const std::string& text) {
  if (text == "averse") return RiskProfile::averse().interval;
  if (text == "neutral") return RiskProfile::neutral().interval;
  if (text == "seeking") return RiskProfile::seeking().interval;
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("expected averse|neutral|seeking or 'alpha,beta': " + text);
  return RiskInterval(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides) {
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = ExperimentConfig::from_file(config_path);
  for (const std::string& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("override must be key=value: " + item);
    cfg.set(item.substr(0, eq), item.substr(eq + 1));
  }
  cfg.validate();

  const RunResult result = run_experiment(cfg);
  std::cout << "wrote " << csv_path(cfg) << " (" << result.rows.size() << " rows, "
            << cfg.seeds.size() << " seeds)\n";
  const auto summary = summarize({csv_path(cfg)});
  std::cout << format_summary_table(summary);
  return 0;
}

int cmd_summarize(const std::vector<std::string>& csv_paths, const std::string& out_prefix) {
  const auto rows = summarize(csv_paths);
  std::cout << format_summary_table(rows);
  if (!out_prefix.empty()) {
    const std::string path = out_prefix + ".csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open summary CSV for writing: " + path);
    write_summary_csv(rows, out);
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

int cmd_demo(const std::string& checkpoint, const std::string& env_name,
             const std::string& risk, int episodes, std::uint64_t seed,
             const std::string& trace_path) {
  const auto tables = load_checkpoint(checkpoint);
  const RiskInterval interval = parse_interval(risk);

  std::ofstream trace;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) throw std::runtime_error("cannot open trace file for writing: " + trace_path);
  }

  if (env_name == "bandit") {
    const auto bandit = envs::VarianceBandit::default_instance();
    std::vector<int> legal(static_cast<std::size_t>(bandit.num_arms()));
    for (int a = 0; a < bandit.num_arms(); ++a) legal[static_cast<std::size_t>(a)] = a;
    Rng rng(seed);
    Rng greedy(0);
    for (int ep = 0; ep < episodes; ++ep) {
      const int arm = act(tables.at(0), 0, legal, interval, 0.0, greedy);
      const double reward = bandit.step(arm, rng);
      std::printf("episode %d: arm=%d reward=%.3f\n", ep, arm, reward);
      if (trace) {
        nlohmann::json record{{"episode", ep}, {"arm", arm}, {"reward", reward}};
        trace << record.dump() << "\n";
      }
    }
    return 0;
  }

  const envs::BattlePreset preset = envs::preset_by_name(env_name);
  if (tables.size() != static_cast<std::size_t>(preset.num_agents))
    throw std::runtime_error("checkpoint holds " + std::to_string(tables.size()) +
                             " tables but preset needs " + std::to_string(preset.num_agents));
  envs::TeamBattleEnv env(preset);
  std::vector<int> legal(envs::kNumBattleActions);
  for (int a = 0; a < envs::kNumBattleActions; ++a) legal[static_cast<std::size_t>(a)] = a;
  Rng greedy(0);

  for (int ep = 0; ep < episodes; ++ep) {
    env.reset(derive_seed(seed, static_cast<std::uint64_t>(ep)));
    std::printf("episode %d\n", ep);
    envs::StepMetrics last{};
    while (!env.terminal()) {
      const envs::Observation& obs = env.observation();
      std::vector<int> joint(static_cast<std::size_t>(preset.num_agents),
                             static_cast<int>(envs::BattleAction::stay));
      for (int i = 0; i < preset.num_agents; ++i) {
        if (!obs.agents[static_cast<std::size_t>(i)].alive()) continue;
        const StateKey key = envs::TeamBattleEnv::agent_state_key(obs, i, preset);
        joint[static_cast<std::size_t>(i)] =
            act(tables[static_cast<std::size_t>(i)], key, legal, interval, 0.0, greedy);
      }
      const auto result = env.step(joint);
      last = result.metrics;
      std::printf("  step %3d actions=[", env.observation().step);
      for (std::size_t i = 0; i < joint.size(); ++i)
        std::printf("%s%d", i ? "," : "", joint[i]);
      std::printf("] reward=%7.3f dealt=%.1f travel=%.1f", result.reward,
                  result.metrics.damage_dealt, result.metrics.travel_distance);
      std::printf(" hp=[");
      for (std::size_t i = 0; i < env.observation().agents.size(); ++i)
        std::printf("%s%d", i ? "," : "", env.observation().agents[i].hp);
      std::printf("] enemy_hp=[");
      for (std::size_t e = 0; e < env.observation().enemies.size(); ++e)
        std::printf("%s%d", e ? "," : "", env.observation().enemies[e].hp);
      std::printf("]\n");
      if (trace) {
        nlohmann::json record{{"episode", ep},
                              {"step", env.observation().step},
                              {"actions", joint},
                              {"reward", result.reward},
                              {"damage_dealt", result.metrics.damage_dealt},
                              {"travel_distance", result.metrics.travel_distance}};
        nlohmann::json units = nlohmann::json::array();
        for (const auto& u : env.observation().agents)
          units.push_back({{"side", "agent"}, {"x", u.x}, {"y", u.y}, {"hp", u.hp}});
        for (const auto& u : env.observation().enemies)
          units.push_back({{"side", "enemy"}, {"x", u.x}, {"y", u.y}, {"hp", u.hp}});
        record["units"] = units;
        trace << record.dump() << "\n";
      }
    }
    std::printf("episode %d done: %s, return=%.3f, illegal_actions=%d\n", ep,
                env.win() ? "win" : "loss", last.episode_return, env.illegal_action_count());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"riskrl: risk-scheduled distributional RL experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "train and evaluate per the config");
  std::string config_path;
  std::vector<std::string> overrides;
  std::string seeds_text, risk_mode, env_name, out_dir;
  std::uint64_t schedule_steps = 0, total_steps = 0;
  run->add_option("--config", config_path, "key=value config file");
  run->add_option("--set", overrides, "override any config key (key=value, repeatable)");
  run->add_option("--seed,--seeds", seeds_text, "comma-separated seed list");
  run->add_option("--risk-mode", risk_mode, "static-averse|static-neutral|static-seeking|sched-averse|sched-neutral");
  run->add_option("--env", env_name, "bandit|focusfire|kiting");
  run->add_option("--schedule-steps", schedule_steps, "risk decay horizon");
  run->add_option("--total-steps", total_steps, "training steps per seed");
  run->add_option("--out", out_dir, "output directory");

  auto* summarize_cmd = app.add_subcommand("summarize", "aggregate run CSVs");
  std::vector<std::string> csv_paths;
  std::string out_prefix;
  summarize_cmd->add_option("csvs", csv_paths, "run CSV files")->required()->expected(-1);
  summarize_cmd->add_option("--out", out_prefix, "also write <prefix>.csv");

  auto* demo = app.add_subcommand("demo", "replay a checkpointed policy");
  std::string checkpoint, demo_env = "kiting", demo_risk = "neutral", trace_path;
  int demo_episodes = 1;
  std::uint64_t demo_seed = 1;
  demo->add_option("--checkpoint", checkpoint, "policy checkpoint (.table)")->required();
  demo->add_option("--env", demo_env, "bandit|focusfire|kiting");
  demo->add_option("--risk", demo_risk, "averse|neutral|seeking or alpha,beta");
  demo->add_option("--episodes", demo_episodes, "episodes to replay");
  demo->add_option("--seed", demo_seed, "episode seed base");
  demo->add_option("--trace", trace_path, "write line-delimited JSON step records");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (!seeds_text.empty()) overrides.push_back("seeds=" + seeds_text);
      if (!risk_mode.empty()) overrides.push_back("risk_mode=" + risk_mode);
      if (!env_name.empty()) overrides.push_back("env=" + env_name);
      if (schedule_steps > 0)
        overrides.push_back("schedule_steps=" + std::to_string(schedule_steps));
      if (total_steps > 0) overrides.push_back("total_steps=" + std::to_string(total_steps));
      if (!out_dir.empty()) overrides.push_back("out_dir=" + out_dir);
      return cmd_run(config_path, overrides);
    }
    if (summarize_cmd->parsed()) return cmd_summarize(csv_paths, out_prefix);
    if (demo->parsed())
      return cmd_demo(checkpoint, demo_env, demo_risk, demo_episodes, demo_seed, trace_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
