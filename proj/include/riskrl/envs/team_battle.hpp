#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "riskrl/agent.hpp"
#include "riskrl/rng.hpp"

namespace riskrl::envs {

// Agent move set. Attack targets the nearest living enemy in range after
// moves resolve; an attack with no target in range is treated as stay and
// logged.
enum class BattleAction { up = 0, down = 1, left = 2, right = 3, stay = 4, attack = 5 };
inline constexpr int kNumBattleActions = 6;

struct UnitSpec {
  int max_hp = 1;
  int attack_range = 1;
  int attack_damage = 1;
  int move_period = 1;         // unit moves on steps where step % move_period == 0
  double pursuit_noise = 0.0;  // chance a scripted unit steps randomly instead of chasing
};

struct BattlePreset {
  std::string name;
  int width = 8;
  int height = 6;
  int num_agents = 2;
  int num_enemies = 1;
  UnitSpec agent;
  UnitSpec enemy;
  int sight_range = 16;
  int max_steps = 50;
  double kill_bonus = 2.0;
  double win_bonus = 10.0;
  double damage_taken_weight = 0.5;
  double step_cost = 0.0;
  std::vector<std::pair<int, int>> agent_spawns;
  std::vector<std::pair<int, int>> enemy_spawns;  // used when spawn zone is disabled
  bool randomize_enemy_spawn = false;
  int enemy_zone_x0 = 0, enemy_zone_x1 = 0, enemy_zone_y0 = 0, enemy_zone_y1 = 0;
};

// Slow, tanky melee enemies: concentrating ranged fire on one enemy at a
// time is the winning skill.
BattlePreset focusfire_preset();

// Fast, hard-hitting melee enemies against fragile ranged agents: hit-and-run
// is the winning skill, standing toe-to-toe loses.
BattlePreset kiting_preset();

BattlePreset preset_by_name(const std::string& name);

struct Unit {
  int x = 0;
  int y = 0;
  int hp = 0;
  bool alive() const { return hp > 0; }
};

struct Observation {
  std::vector<Unit> agents;
  std::vector<Unit> enemies;
  int step = 0;
};

struct StepMetrics {
  double damage_dealt = 0.0;     // from agents to enemies, this step
  double travel_distance = 0.0;  // sum of agent displacements, this step
  double episode_return = 0.0;   // cumulative shaped reward
  bool win = false;
};

struct StepResult {
  double reward = 0.0;
  StepMetrics metrics;
  bool terminal = false;
};

// Cooperative grid battle. Agents move or attack; scripted enemies pursue
// and attack the nearest agent. Moves resolve simultaneously, then attacks
// pick targets from the post-move snapshot and apply in fixed unit order, so
// episodes are fully determined by (preset, seed, actions).
class TeamBattleEnv {
 public:
  explicit TeamBattleEnv(BattlePreset preset);

  const BattlePreset& preset() const { return preset_; }

  Observation reset(std::uint64_t seed);

  // joint_action holds one entry per agent slot; entries for dead agents are
  // ignored. Illegal entries (off-grid move, attack with no target in range)
  // are treated as stay and counted.
  StepResult step(const std::vector<int>& joint_action);

  const Observation& observation() const { return obs_; }
  bool terminal() const { return terminal_; }
  bool win() const { return win_; }
  int illegal_action_count() const { return illegal_actions_; }

  // Compact per-agent feature key for tabular learners: clamped offset to
  // the nearest living enemy, own and enemy hp, living-enemy count, edge
  // flags, and the step parity when enemies move on a period.
  static StateKey agent_state_key(const Observation& obs, int agent_index,
                                  const BattlePreset& preset);

 private:
  int nearest_living_enemy(int x, int y) const;
  int nearest_living_agent(int x, int y) const;

  BattlePreset preset_;
  Rng rng_;
  Observation obs_;
  bool terminal_ = true;
  bool win_ = false;
  int illegal_actions_ = 0;
  double episode_return_ = 0.0;
};

}  // namespace riskrl::envs
