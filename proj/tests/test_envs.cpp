#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "riskrl/envs/team_battle.hpp"
#include "riskrl/envs/variance_bandit.hpp"
#include "riskrl/risk.hpp"

using namespace riskrl;
using namespace riskrl::envs;

TEST_CASE("bandit arms sample their distributions") {
  const auto bandit = VarianceBandit::default_instance();
  Rng rng(3);
  for (int k = 0; k < 50; ++k) CHECK(bandit.step(VarianceBandit::kSafeArm, rng) == 0.5);

  double acc = 0.0, acc2 = 0.0;
  const int draws = 100'000;
  for (int k = 0; k < draws; ++k) {
    const double r = bandit.step(VarianceBandit::kRiskyArm, rng);
    CHECK((r == 0.0 || r == 1.0));
    acc += r;
    acc2 += r * r;
  }
  const double mean = acc / draws;
  const double var = acc2 / draws - mean * mean;
  // Bernoulli moments within 3 sigma of the sample size
  CHECK(std::fabs(mean - 0.5) < 3.0 * 0.5 / std::sqrt(draws));
  CHECK(std::fabs(var - 0.25) < 0.01);

  CHECK_THROWS_AS(bandit.step(2, rng), std::invalid_argument);
  CHECK_THROWS_AS(VarianceBandit({{{0.0, 0.4}, {1.0, 0.4}}}), std::invalid_argument);
}

TEST_CASE("exact bandit quantiles separate the risk levels") {
  const auto bandit = VarianceBandit::default_instance();
  const auto risky = bandit.true_quantiles(VarianceBandit::kRiskyArm, 8);
  CHECK(risky.values() == std::vector<double>{0, 0, 0, 0, 1, 1, 1, 1});
  const auto safe = bandit.true_quantiles(VarianceBandit::kSafeArm, 8);

  // averse values the worst cases: the risky arm's low tail is 0
  CHECK(interval_expectation(risky, RiskInterval(0.0, 0.25)) == doctest::Approx(0.0));
  CHECK(interval_expectation(safe, RiskInterval(0.0, 0.25)) == doctest::Approx(0.5));

  const std::vector<QuantileDistribution> arms{safe, risky};
  Rng rng(5);
  CHECK(select_action(arms, RiskProfile::averse().interval, 0.0, rng) ==
        VarianceBandit::kSafeArm);
  CHECK(select_action(arms, RiskProfile::seeking().interval, 0.0, rng) ==
        VarianceBandit::kRiskyArm);
  // equal means: the neutral choice is a tie, resolved to the lowest index
  CHECK(select_action(arms, RiskProfile::neutral().interval, 0.0, rng) == 0);
}

TEST_CASE("battle reset is deterministic per seed and preset") {
  for (const char* name : {"focusfire", "kiting"}) {
    TeamBattleEnv env(preset_by_name(name));
    const auto obs1 = env.reset(99);
    const auto obs2 = env.reset(99);
    REQUIRE(obs1.agents.size() == obs2.agents.size());
    for (std::size_t i = 0; i < obs1.agents.size(); ++i) {
      CHECK(obs1.agents[i].x == obs2.agents[i].x);
      CHECK(obs1.agents[i].y == obs2.agents[i].y);
      CHECK(obs1.agents[i].hp == obs2.agents[i].hp);
    }
    for (std::size_t e = 0; e < obs1.enemies.size(); ++e) {
      CHECK(obs1.enemies[e].x == obs2.enemies[e].x);
      CHECK(obs1.enemies[e].y == obs2.enemies[e].y);
    }
  }
  // the kiting preset resamples enemy spawns inside the zone per seed
  TeamBattleEnv kiting(kiting_preset());
  const auto a = kiting.reset(1);
  bool any_difference = false;
  for (std::uint64_t seed = 2; seed < 12 && !any_difference; ++seed) {
    const auto b = kiting.reset(seed);
    for (std::size_t e = 0; e < a.enemies.size(); ++e)
      if (b.enemies[e].x != a.enemies[e].x || b.enemies[e].y != a.enemies[e].y)
        any_difference = true;
  }
  CHECK(any_difference);
  const auto& preset = kiting.preset();
  for (const auto& enemy : kiting.reset(7).enemies) {
    CHECK(enemy.x >= preset.enemy_zone_x0);
    CHECK(enemy.x <= preset.enemy_zone_x1);
    CHECK(enemy.y >= preset.enemy_zone_y0);
    CHECK(enemy.y <= preset.enemy_zone_y1);
  }
  // presets have distinct layouts
  CHECK(focusfire_preset().agent_spawns != kiting_preset().agent_spawns);
}

TEST_CASE("all-stay step has no damage and no travel") {
  TeamBattleEnv env(focusfire_preset());
  env.reset(1);
  // spawns are far apart, nothing in range on the first step
  const auto result = env.step(std::vector<int>(3, static_cast<int>(BattleAction::stay)));
  CHECK(result.metrics.damage_dealt == 0.0);
  CHECK(result.metrics.travel_distance == 0.0);
  CHECK_FALSE(result.metrics.win);
}

TEST_CASE("attack kills an adjacent 1-hp enemy and pays the kill bonus") {
  BattlePreset preset = focusfire_preset();
  preset.num_agents = 1;
  preset.num_enemies = 1;
  preset.agent_spawns = {{2, 2}};
  preset.enemy_spawns = {{3, 2}};
  preset.enemy.max_hp = 1;
  preset.step_cost = 0.0;
  TeamBattleEnv env(preset);
  env.reset(4);
  const auto result = env.step({static_cast<int>(BattleAction::attack)});
  CHECK(result.metrics.damage_dealt == 1.0);
  CHECK(result.metrics.win);
  CHECK(result.terminal);
  // dealt 1, took one melee hit back (weight 0.5), kill + win bonuses
  CHECK(result.reward == doctest::Approx(1.0 - 0.5 * preset.enemy.attack_damage +
                                         preset.kill_bonus + preset.win_bonus));
}

TEST_CASE("focused fire kills in hp/(m*damage) steps") {
  const BattlePreset base = focusfire_preset();
  // the preset's arithmetic: concentrating all agents is faster than splitting
  const int focused_steps =
      (base.enemy.max_hp + base.num_agents * base.agent.attack_damage - 1) /
      (base.num_agents * base.agent.attack_damage);
  const int split_steps = (base.enemy.max_hp + base.agent.attack_damage - 1) / base.agent.attack_damage;
  CHECK(focused_steps < split_steps);

  // simulate: all three agents adjacent to one enemy, attacking every step
  BattlePreset preset = base;
  preset.num_enemies = 1;
  preset.enemy_spawns = {{4, 2}};
  preset.agent_spawns = {{3, 2}, {4, 1}, {4, 3}};
  preset.enemy.pursuit_noise = 0.0;
  TeamBattleEnv env(preset);
  env.reset(8);
  int steps = 0;
  while (!env.terminal()) {
    env.step(std::vector<int>(3, static_cast<int>(BattleAction::attack)));
    ++steps;
  }
  CHECK(env.win());
  CHECK(steps == focused_steps);
}

TEST_CASE("illegal actions are coerced to stay and logged") {
  BattlePreset preset = focusfire_preset();
  preset.num_agents = 1;
  preset.num_enemies = 1;
  preset.agent_spawns = {{0, 0}};
  preset.enemy_spawns = {{7, 5}};
  TeamBattleEnv env(preset);
  env.reset(2);
  CHECK(env.illegal_action_count() == 0);
  env.step({static_cast<int>(BattleAction::up)});  // off-grid at the top edge
  CHECK(env.illegal_action_count() == 1);
  const auto& obs = env.observation();
  CHECK(obs.agents[0].x == 0);
  CHECK(obs.agents[0].y == 0);
  env.step({static_cast<int>(BattleAction::attack)});  // nothing in range
  CHECK(env.illegal_action_count() == 2);
  CHECK_THROWS_AS(env.step({17}), std::invalid_argument);
}

TEST_CASE("episodes are deterministic and conserve damage") {
  const BattlePreset preset = kiting_preset();
  for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
    // a fixed pseudo-random policy driven by its own stream
    auto run = [&](std::vector<double>* damage_by_step) {
      TeamBattleEnv env(preset);
      env.reset(seed);
      Rng policy(seed * 7 + 1);
      double episode_damage = 0.0;
      std::vector<std::vector<int>> trace;
      while (!env.terminal()) {
        std::vector<int> joint(static_cast<std::size_t>(preset.num_agents));
        for (auto& a : joint) a = static_cast<int>(policy.uniform_int(kNumBattleActions));
        const auto result = env.step(joint);
        episode_damage += result.metrics.damage_dealt;
        if (damage_by_step) damage_by_step->push_back(result.metrics.damage_dealt);
        std::vector<int> state;
        for (const auto& u : env.observation().agents) {
          state.push_back(u.x);
          state.push_back(u.y);
          state.push_back(u.hp);
        }
        for (const auto& u : env.observation().enemies) {
          state.push_back(u.x);
          state.push_back(u.y);
          state.push_back(u.hp);
        }
        trace.push_back(state);
      }
      // per-enemy conservation: dealt <= initial hp + one attack of overkill
      const double max_total = preset.num_enemies * preset.enemy.max_hp +
                               preset.num_enemies * preset.agent.attack_damage;
      CHECK(episode_damage <= max_total);
      return std::pair{episode_damage, trace};
    };
    std::vector<double> steps;
    const auto first = run(&steps);
    const auto second = run(nullptr);
    CHECK(first.first == second.first);
    CHECK(first.second == second.second);  // bit-identical trajectories
    double sum = 0.0;
    for (double d : steps) sum += d;
    CHECK(sum == first.first);  // episode damage is the sum of per-step damage
  }
}

TEST_CASE("agent state keys are stable and discriminating") {
  const BattlePreset preset = kiting_preset();
  TeamBattleEnv env(preset);
  Observation obs = env.reset(21);
  // pull the first enemy inside the clamp horizon so offsets discriminate
  obs.enemies[0].x = obs.agents[0].x + 2;
  obs.enemies[0].y = obs.agents[0].y;
  const StateKey key = TeamBattleEnv::agent_state_key(obs, 0, preset);
  CHECK(key == TeamBattleEnv::agent_state_key(obs, 0, preset));
  CHECK(key != 0);

  Observation moved = obs;
  moved.agents[0].x += 1;
  CHECK(TeamBattleEnv::agent_state_key(moved, 0, preset) != key);

  Observation hurt = obs;
  hurt.agents[0].hp -= 1;
  CHECK(TeamBattleEnv::agent_state_key(hurt, 0, preset) != key);

  Observation dead = obs;
  dead.agents[0].hp = 0;
  CHECK(TeamBattleEnv::agent_state_key(dead, 0, preset) == 0);
  CHECK_THROWS_AS(TeamBattleEnv::agent_state_key(obs, 9, preset), std::invalid_argument);
}
