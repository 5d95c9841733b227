#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "riskrl/quantile_dist.hpp"
#include "riskrl/risk.hpp"

namespace riskrl {

using StateKey = std::uint64_t;

struct Transition {
  StateKey state = 0;
  int action = 0;
  double reward = 0.0;
  StateKey next_state = 0;
  std::vector<int> next_legal_actions;  // non-empty when not terminal
  bool terminal = false;
};

struct LearnerConfig {
  double gamma = 0.99;
  double lr = 0.05;
  int num_quantiles = 8;
  double kappa = 1.0;
  // Bootstrap action selection at the next state uses the risk-neutral
  // expectation by default; set this to bootstrap through a risk-distorted
  // greedy action instead.
  std::optional<RiskInterval> bootstrap_interval;
};

// Per-(state, action) quantile distributions stored as contiguous rows of
// num_actions * num_quantiles values. Missing entries read as the constant
// distribution at initial_value; per-action slices stay sorted.
class QuantileTable {
 public:
  QuantileTable(int num_quantiles, int num_actions, double initial_value = 0.0);

  int num_quantiles() const { return num_quantiles_; }
  int num_actions() const { return num_actions_; }
  double initial_value() const { return initial_value_; }
  std::size_t num_states() const { return rows_.size(); }

  std::span<const double> values(StateKey state, int action) const;
  QuantileDistribution distribution(StateKey state, int action) const;
  double action_expectation(StateKey state, int action) const;
  double action_interval_expectation(StateKey state, int action,
                                     const RiskInterval& interval) const;

  // Materializes the row if absent.
  std::span<double> mutable_values(StateKey state, int action);
  void sort_values(StateKey state, int action);

  std::vector<StateKey> sorted_state_keys() const;

  // Line-oriented text checkpoint, one (state, action, values...) line per
  // entry with hex floats, so the round trip is lossless.
  void save(std::ostream& out) const;
  static QuantileTable load(std::istream& in);
  void save_file(const std::string& path) const;
  static QuantileTable load_file(const std::string& path);

  bool operator==(const QuantileTable&) const = default;

 private:
  void check_action(int action) const;

  int num_quantiles_;
  int num_actions_;
  double initial_value_;
  std::vector<double> default_slice_;
  std::unordered_map<StateKey, std::vector<double>> rows_;
};

// Greedy action under the risk-neutral expectation; ties to lowest index.
int greedy_target_action(const QuantileTable& table, StateKey state, std::span<const int> legal);

// One quantile-regression TD step on table[state, action] toward the
// distributional target reward + gamma * Z(next_state, greedy). Returns the
// quantile-Huber loss before the step.
double qr_update(QuantileTable& table, const Transition& transition, const LearnerConfig& cfg);

// Risk-conditioned epsilon-greedy over the table's distributions, restricted
// to the legal set (must be sorted ascending for the tie-break contract).
int act(const QuantileTable& table, StateKey state, std::span<const int> legal,
        const RiskInterval& interval, double epsilon, Rng& rng);

}  // namespace riskrl
