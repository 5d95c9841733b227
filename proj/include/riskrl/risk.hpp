#pragma once

#include <cstdint>
#include <vector>

#include "riskrl/quantile_dist.hpp"
#include "riskrl/risk_interval.hpp"
#include "riskrl/rng.hpp"

namespace riskrl {

enum class RiskKind { averse, neutral, seeking };

// Named risk level with its quantile-fraction sampling interval.
struct RiskProfile {
  RiskKind kind;
  RiskInterval interval;

  static RiskProfile averse() { return {RiskKind::averse, RiskInterval(0.0, 0.25)}; }
  static RiskProfile neutral() { return {RiskKind::neutral, RiskInterval(0.0, 1.0)}; }
  static RiskProfile seeking() { return {RiskKind::seeking, RiskInterval(0.75, 1.0)}; }
};

enum class ScheduleMode { fixed, scheduled };

// Time-indexed policy producing the fraction-sampling interval per training
// step. Scheduled mode decays linearly from the seeking interval to the
// target: alpha shrinks to 0 first and, for an averse target, beta then
// shrinks to 0.25. The interval is held at the target from total_steps on.
struct RiskSchedule {
  RiskInterval start;
  RiskProfile target;
  std::uint64_t total_steps = 0;
  ScheduleMode mode = ScheduleMode::fixed;

  // Hold a single risk level for the whole run. A fixed seeking policy is
  // supported for comparison runs even though it is a known-weak baseline.
  static RiskSchedule fixed(RiskProfile target);

  // Linear decay from the seeking interval to an averse or neutral target.
  static RiskSchedule seeking_to(RiskProfile target, std::uint64_t total_steps);
};

RiskInterval interval_at_step(const RiskSchedule& schedule, std::uint64_t t);

struct EpsilonSchedule {
  double eps_start = 1.0;
  double eps_end = 0.05;
  std::uint64_t eps_steps = 10'000;

  EpsilonSchedule() = default;
  EpsilonSchedule(double start, double end, std::uint64_t steps);
};

double epsilon_at_step(const EpsilonSchedule& schedule, std::uint64_t t);

// Risk-conditioned epsilon-greedy: with probability epsilon a uniformly
// random index, otherwise the index maximizing the interval expectation of
// its distribution. Ties go to the lowest index.
int select_action(const std::vector<QuantileDistribution>& action_dists,
                  const RiskInterval& interval, double epsilon, Rng& rng);

}  // namespace riskrl
