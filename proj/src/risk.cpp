#include "riskrl/risk.hpp"

#include <stdexcept>

namespace riskrl {

RiskSchedule RiskSchedule::fixed(RiskProfile target) {
  RiskSchedule s;
  s.start = target.interval;
  s.target = target;
  s.total_steps = 0;
  s.mode = ScheduleMode::fixed;
  return s;
}

RiskSchedule RiskSchedule::seeking_to(RiskProfile target, std::uint64_t total_steps) {
  if (target.kind == RiskKind::seeking)
    throw std::invalid_argument("RiskSchedule: scheduled target must be averse or neutral");
  if (total_steps == 0)
    throw std::invalid_argument("RiskSchedule: scheduled mode needs total_steps > 0");
  RiskSchedule s;
  s.start = RiskProfile::seeking().interval;
  s.target = target;
  s.total_steps = total_steps;
  s.mode = ScheduleMode::scheduled;
  return s;
}

RiskInterval interval_at_step(const RiskSchedule& schedule, std::uint64_t t) {
  if (schedule.mode == ScheduleMode::fixed || t >= schedule.total_steps)
    return schedule.target.interval;

  const double steps = static_cast<double>(schedule.total_steps);
  const double td = static_cast<double>(t);

  if (schedule.target.kind == RiskKind::neutral) {
    // alpha decays start.alpha -> 0 over the whole horizon, beta stays 1
    const double alpha = schedule.start.alpha * (1.0 - td / steps);
    return RiskInterval(alpha, 1.0);
  }

  // averse target: alpha decays to 0 over the first half, then beta decays
  // from 1 to the target beta over the second half
  const double half = steps / 2.0;
  if (td < half) {
    const double alpha = schedule.start.alpha * (1.0 - td / half);
    return RiskInterval(alpha, 1.0);
  }
  const double beta = 1.0 - (1.0 - schedule.target.interval.beta) * ((td - half) / half);
  return RiskInterval(0.0, beta);
}

EpsilonSchedule::EpsilonSchedule(double start, double end, std::uint64_t steps)
    : eps_start(start), eps_end(end), eps_steps(steps) {
  if (!(1.0 >= eps_start && eps_start >= eps_end && eps_end >= 0.0))
    throw std::invalid_argument("EpsilonSchedule: need 1 >= eps_start >= eps_end >= 0");
}

double epsilon_at_step(const EpsilonSchedule& schedule, std::uint64_t t) {
  if (t >= schedule.eps_steps) return schedule.eps_end;
  const double frac = static_cast<double>(t) / static_cast<double>(schedule.eps_steps);
  return schedule.eps_start + (schedule.eps_end - schedule.eps_start) * frac;
}

int select_action(const std::vector<QuantileDistribution>& action_dists,
                  const RiskInterval& interval, double epsilon, Rng& rng) {
  if (action_dists.empty())
    throw std::invalid_argument("select_action: need at least one legal action");
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("select_action: epsilon must be in [0, 1]");

  if (epsilon > 0.0 && rng.uniform() < epsilon)
    return static_cast<int>(rng.uniform_int(action_dists.size()));

  int best = 0;
  double best_value = interval_expectation(action_dists[0], interval);
  for (std::size_t a = 1; a < action_dists.size(); ++a) {
    const double value = interval_expectation(action_dists[a], interval);
    if (value > best_value) {
      best = static_cast<int>(a);
      best_value = value;
    }
  }
  return best;
}

}  // namespace riskrl
