#include "riskrl/envs/team_battle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace riskrl::envs {

namespace {

constexpr int kDx[4] = {0, 0, -1, 1};  // up, down, left, right
constexpr int kDy[4] = {-1, 1, 0, 0};

int manhattan(int ax, int ay, int bx, int by) { return std::abs(ax - bx) + std::abs(ay - by); }

int clamp_int(int v, int lo, int hi) { return std::max(lo, std::min(hi, v)); }

}  // namespace

BattlePreset focusfire_preset() {
  BattlePreset p;
  p.name = "focusfire";
  p.width = 8;
  p.height = 6;
  p.num_agents = 3;
  p.num_enemies = 2;
  p.agent = {/*max_hp=*/3, /*attack_range=*/2, /*attack_damage=*/1, /*move_period=*/1,
             /*pursuit_noise=*/0.0};
  p.enemy = {/*max_hp=*/6, /*attack_range=*/1, /*attack_damage=*/1, /*move_period=*/2,
             /*pursuit_noise=*/0.3};
  p.sight_range = 16;
  p.max_steps = 60;
  p.kill_bonus = 2.0;
  p.win_bonus = 10.0;
  p.damage_taken_weight = 0.5;
  p.step_cost = 0.02;
  p.agent_spawns = {{1, 1}, {1, 2}, {1, 3}};
  p.enemy_spawns = {{4, 1}, {4, 3}};
  return p;
}

BattlePreset kiting_preset() {
  BattlePreset p;
  p.name = "kiting";
  p.width = 10;
  p.height = 6;
  p.num_agents = 2;
  p.num_enemies = 2;
  p.agent = {/*max_hp=*/3, /*attack_range=*/2, /*attack_damage=*/1, /*move_period=*/1,
             /*pursuit_noise=*/0.0};
  p.enemy = {/*max_hp=*/6, /*attack_range=*/1, /*attack_damage=*/2, /*move_period=*/1,
             /*pursuit_noise=*/0.25};
  p.sight_range = 16;
  p.max_steps = 60;
  p.kill_bonus = 2.0;
  p.win_bonus = 10.0;
  p.damage_taken_weight = 0.5;
  p.step_cost = 0.02;
  p.agent_spawns = {{2, 2}, {2, 3}};
  p.randomize_enemy_spawn = true;
  p.enemy_zone_x0 = 7;
  p.enemy_zone_x1 = 9;
  p.enemy_zone_y0 = 1;
  p.enemy_zone_y1 = 4;
  return p;
}

BattlePreset preset_by_name(const std::string& name) {
  if (name == "focusfire") return focusfire_preset();
  if (name == "kiting") return kiting_preset();
  throw std::invalid_argument("unknown battle preset: " + name);
}

TeamBattleEnv::TeamBattleEnv(BattlePreset preset) : preset_(std::move(preset)), rng_(0) {
  if (preset_.num_agents < 1 || preset_.num_enemies < 1)
    throw std::invalid_argument("TeamBattleEnv: need at least one agent and one enemy");
  if (static_cast<int>(preset_.agent_spawns.size()) != preset_.num_agents)
    throw std::invalid_argument("TeamBattleEnv: agent spawn count mismatch");
  if (!preset_.randomize_enemy_spawn &&
      static_cast<int>(preset_.enemy_spawns.size()) != preset_.num_enemies)
    throw std::invalid_argument("TeamBattleEnv: enemy spawn count mismatch");
}

Observation TeamBattleEnv::reset(std::uint64_t seed) {
  rng_ = Rng(seed);
  obs_ = Observation{};
  obs_.agents.resize(preset_.num_agents);
  obs_.enemies.resize(preset_.num_enemies);
  for (int i = 0; i < preset_.num_agents; ++i) {
    obs_.agents[i].x = preset_.agent_spawns[i].first;
    obs_.agents[i].y = preset_.agent_spawns[i].second;
    obs_.agents[i].hp = preset_.agent.max_hp;
  }
  if (preset_.randomize_enemy_spawn) {
    // sample distinct cells from the spawn zone
    std::vector<std::pair<int, int>> taken;
    for (int i = 0; i < preset_.num_enemies; ++i) {
      std::pair<int, int> cell;
      do {
        cell.first = preset_.enemy_zone_x0 +
                     static_cast<int>(rng_.uniform_int(preset_.enemy_zone_x1 - preset_.enemy_zone_x0 + 1));
        cell.second = preset_.enemy_zone_y0 +
                      static_cast<int>(rng_.uniform_int(preset_.enemy_zone_y1 - preset_.enemy_zone_y0 + 1));
      } while (std::find(taken.begin(), taken.end(), cell) != taken.end());
      taken.push_back(cell);
      obs_.enemies[i].x = cell.first;
      obs_.enemies[i].y = cell.second;
      obs_.enemies[i].hp = preset_.enemy.max_hp;
    }
  } else {
    for (int i = 0; i < preset_.num_enemies; ++i) {
      obs_.enemies[i].x = preset_.enemy_spawns[i].first;
      obs_.enemies[i].y = preset_.enemy_spawns[i].second;
      obs_.enemies[i].hp = preset_.enemy.max_hp;
    }
  }
  obs_.step = 0;
  terminal_ = false;
  win_ = false;
  illegal_actions_ = 0;
  episode_return_ = 0.0;
  return obs_;
}

int TeamBattleEnv::nearest_living_enemy(int x, int y) const {
  int best = -1, best_dist = 0;
  for (int e = 0; e < preset_.num_enemies; ++e) {
    if (!obs_.enemies[e].alive()) continue;
    const int d = manhattan(x, y, obs_.enemies[e].x, obs_.enemies[e].y);
    if (best < 0 || d < best_dist) {
      best = e;
      best_dist = d;
    }
  }
  return best;
}

int TeamBattleEnv::nearest_living_agent(int x, int y) const {
  int best = -1, best_dist = 0;
  for (int a = 0; a < preset_.num_agents; ++a) {
    if (!obs_.agents[a].alive()) continue;
    const int d = manhattan(x, y, obs_.agents[a].x, obs_.agents[a].y);
    if (best < 0 || d < best_dist) {
      best = a;
      best_dist = d;
    }
  }
  return best;
}

StepResult TeamBattleEnv::step(const std::vector<int>& joint_action) {
  if (terminal_) throw std::logic_error("TeamBattleEnv::step: episode is terminal, reset first");
  if (static_cast<int>(joint_action.size()) != preset_.num_agents)
    throw std::invalid_argument("TeamBattleEnv::step: need one action per agent slot");

  enum class Intent { stay, move, attack };
  struct Plan {
    Intent intent = Intent::stay;
    int nx = 0, ny = 0;
  };

  std::vector<Plan> agent_plans(preset_.num_agents);
  std::vector<Plan> enemy_plans(preset_.num_enemies);

  // agent intents from the pre-move snapshot
  for (int i = 0; i < preset_.num_agents; ++i) {
    const Unit& unit = obs_.agents[i];
    Plan& plan = agent_plans[i];
    plan.nx = unit.x;
    plan.ny = unit.y;
    if (!unit.alive()) continue;
    const int action = joint_action[i];
    if (action < 0 || action >= kNumBattleActions)
      throw std::invalid_argument("TeamBattleEnv::step: action id out of range");
    if (action == static_cast<int>(BattleAction::attack)) {
      plan.intent = Intent::attack;
    } else if (action != static_cast<int>(BattleAction::stay)) {
      const int nx = unit.x + kDx[action];
      const int ny = unit.y + kDy[action];
      if (nx < 0 || nx >= preset_.width || ny < 0 || ny >= preset_.height) {
        ++illegal_actions_;  // off-grid, treated as stay
      } else {
        plan.intent = Intent::move;
        plan.nx = nx;
        plan.ny = ny;
      }
    }
  }

  // scripted enemy intents: attack when an agent is in range, otherwise
  // pursue the nearest agent on the unit's move period
  for (int e = 0; e < preset_.num_enemies; ++e) {
    const Unit& unit = obs_.enemies[e];
    Plan& plan = enemy_plans[e];
    plan.nx = unit.x;
    plan.ny = unit.y;
    if (!unit.alive()) continue;
    const int target = nearest_living_agent(unit.x, unit.y);
    if (target < 0) continue;
    const Unit& agent = obs_.agents[target];
    const int dist = manhattan(unit.x, unit.y, agent.x, agent.y);
    if (dist <= preset_.enemy.attack_range) {
      plan.intent = Intent::attack;
    } else if (dist <= preset_.sight_range && obs_.step % preset_.enemy.move_period == 0) {
      int nx = unit.x, ny = unit.y;
      if (preset_.enemy.pursuit_noise > 0.0 && rng_.uniform() < preset_.enemy.pursuit_noise) {
        const int dir = static_cast<int>(rng_.uniform_int(4));
        nx += kDx[dir];
        ny += kDy[dir];
      } else {
        const int dx = agent.x - unit.x;
        const int dy = agent.y - unit.y;
        if (std::abs(dx) >= std::abs(dy))
          nx += (dx > 0) ? 1 : -1;
        else
          ny += (dy > 0) ? 1 : -1;
      }
      if (nx >= 0 && nx < preset_.width && ny >= 0 && ny < preset_.height) {
        plan.intent = Intent::move;
        plan.nx = nx;
        plan.ny = ny;
      }
    }
  }

  // moves resolve simultaneously
  double travel = 0.0;
  for (int i = 0; i < preset_.num_agents; ++i) {
    if (agent_plans[i].intent != Intent::move) continue;
    Unit& unit = obs_.agents[i];
    travel += manhattan(unit.x, unit.y, agent_plans[i].nx, agent_plans[i].ny);
    unit.x = agent_plans[i].nx;
    unit.y = agent_plans[i].ny;
  }
  for (int e = 0; e < preset_.num_enemies; ++e) {
    if (enemy_plans[e].intent != Intent::move) continue;
    obs_.enemies[e].x = enemy_plans[e].nx;
    obs_.enemies[e].y = enemy_plans[e].ny;
  }

  // attacks pick targets from the post-move snapshot and apply in unit
  // order; an attack whose snapshot target already fell this step is wasted,
  // which bounds per-enemy overkill to a single attack
  double damage_dealt = 0.0;
  double damage_taken = 0.0;
  int kills = 0;

  std::vector<int> enemy_hp_after(preset_.num_enemies);
  for (int e = 0; e < preset_.num_enemies; ++e) enemy_hp_after[e] = obs_.enemies[e].hp;
  for (int i = 0; i < preset_.num_agents; ++i) {
    if (agent_plans[i].intent != Intent::attack || !obs_.agents[i].alive()) continue;
    const int target = nearest_living_enemy(obs_.agents[i].x, obs_.agents[i].y);
    if (target < 0 || manhattan(obs_.agents[i].x, obs_.agents[i].y, obs_.enemies[target].x,
                                obs_.enemies[target].y) > preset_.agent.attack_range) {
      ++illegal_actions_;  // nothing in range, treated as stay
      continue;
    }
    if (enemy_hp_after[target] <= 0) continue;  // fell earlier this step
    enemy_hp_after[target] -= preset_.agent.attack_damage;
    damage_dealt += preset_.agent.attack_damage;
    if (enemy_hp_after[target] <= 0) ++kills;
  }

  std::vector<int> agent_hp_after(preset_.num_agents);
  for (int a = 0; a < preset_.num_agents; ++a) agent_hp_after[a] = obs_.agents[a].hp;
  for (int e = 0; e < preset_.num_enemies; ++e) {
    // enemies that fall this step still land their simultaneous attack
    if (enemy_plans[e].intent != Intent::attack || !obs_.enemies[e].alive()) continue;
    const int target = nearest_living_agent(obs_.enemies[e].x, obs_.enemies[e].y);
    if (target < 0 || manhattan(obs_.enemies[e].x, obs_.enemies[e].y, obs_.agents[target].x,
                                obs_.agents[target].y) > preset_.enemy.attack_range)
      continue;  // target stepped out of range
    if (agent_hp_after[target] <= 0) continue;
    agent_hp_after[target] -= preset_.enemy.attack_damage;
    damage_taken += preset_.enemy.attack_damage;
  }

  for (int e = 0; e < preset_.num_enemies; ++e)
    obs_.enemies[e].hp = std::max(0, enemy_hp_after[e]);
  for (int a = 0; a < preset_.num_agents; ++a) obs_.agents[a].hp = std::max(0, agent_hp_after[a]);

  obs_.step += 1;

  const bool all_enemies_dead =
      std::none_of(obs_.enemies.begin(), obs_.enemies.end(), [](const Unit& u) { return u.alive(); });
  const bool all_agents_dead =
      std::none_of(obs_.agents.begin(), obs_.agents.end(), [](const Unit& u) { return u.alive(); });

  win_ = all_enemies_dead;
  terminal_ = all_enemies_dead || all_agents_dead || obs_.step >= preset_.max_steps;

  double reward = damage_dealt - preset_.damage_taken_weight * damage_taken +
                  preset_.kill_bonus * kills - preset_.step_cost;
  if (win_) reward += preset_.win_bonus;
  episode_return_ += reward;

  StepResult result;
  result.reward = reward;
  result.terminal = terminal_;
  result.metrics.damage_dealt = damage_dealt;
  result.metrics.travel_distance = travel;
  result.metrics.episode_return = episode_return_;
  result.metrics.win = win_;
  return result;
}

StateKey TeamBattleEnv::agent_state_key(const Observation& obs, int agent_index,
                                        const BattlePreset& preset) {
  if (agent_index < 0 || agent_index >= static_cast<int>(obs.agents.size()))
    throw std::invalid_argument("agent_state_key: agent index out of range");
  const Unit& self = obs.agents[agent_index];
  if (!self.alive()) return 0;

  int best = -1, best_dist = 0;
  int living_enemies = 0;
  for (int e = 0; e < static_cast<int>(obs.enemies.size()); ++e) {
    if (!obs.enemies[e].alive()) continue;
    ++living_enemies;
    const int d = manhattan(self.x, self.y, obs.enemies[e].x, obs.enemies[e].y);
    if (best < 0 || d < best_dist) {
      best = e;
      best_dist = d;
    }
  }

  std::uint64_t offset_code = 81;  // sentinel: no living enemy
  std::uint64_t enemy_hp = 0;
  if (best >= 0) {
    const int dx = clamp_int(obs.enemies[best].x - self.x, -4, 4);
    const int dy = clamp_int(obs.enemies[best].y - self.y, -4, 4);
    offset_code = static_cast<std::uint64_t>((dx + 4) * 9 + (dy + 4));
    enemy_hp = static_cast<std::uint64_t>(clamp_int(obs.enemies[best].hp, 0, 7));
  }

  const std::uint64_t own_hp = static_cast<std::uint64_t>(clamp_int(self.hp, 0, 7));
  const std::uint64_t enemy_count = static_cast<std::uint64_t>(clamp_int(living_enemies, 0, 3));
  const std::uint64_t edge_x = (self.x == 0 || self.x == preset.width - 1) ? 1 : 0;
  const std::uint64_t edge_y = (self.y == 0 || self.y == preset.height - 1) ? 1 : 0;
  const std::uint64_t parity =
      (preset.enemy.move_period > 1) ? static_cast<std::uint64_t>(obs.step % 2) : 0;

  return 1 + (offset_code | (own_hp << 7) | (enemy_hp << 10) | (enemy_count << 13) |
              (edge_x << 15) | (edge_y << 16) | (parity << 17));
}

}  // namespace riskrl::envs
