#include "riskrl/envs/variance_bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskrl::envs {

VarianceBandit::VarianceBandit(std::vector<std::vector<DiscreteOutcome>> arms)
    : arms_(std::move(arms)) {
  if (arms_.empty()) throw std::invalid_argument("VarianceBandit: need at least one arm");
  for (auto& arm : arms_) {
    if (arm.empty()) throw std::invalid_argument("VarianceBandit: arm with no outcomes");
    double total = 0.0;
    for (const auto& outcome : arm) {
      if (!(outcome.probability >= 0.0))
        throw std::invalid_argument("VarianceBandit: negative outcome probability");
      if (!std::isfinite(outcome.value))
        throw std::invalid_argument("VarianceBandit: outcome value must be finite");
      total += outcome.probability;
    }
    if (std::fabs(total - 1.0) > 1e-9)
      throw std::invalid_argument("VarianceBandit: arm probabilities must sum to 1");
    std::sort(arm.begin(), arm.end(),
              [](const DiscreteOutcome& a, const DiscreteOutcome& b) { return a.value < b.value; });
  }
}

VarianceBandit VarianceBandit::default_instance() {
  return VarianceBandit({
      {{0.5, 1.0}},              // safe: 0.5 with certainty
      {{0.0, 0.5}, {1.0, 0.5}},  // risky: fair coin over {0, 1}, same mean
  });
}

const std::vector<DiscreteOutcome>& VarianceBandit::arm(int index) const {
  if (index < 0 || index >= num_arms())
    throw std::invalid_argument("VarianceBandit: arm index out of range");
  return arms_[static_cast<std::size_t>(index)];
}

double VarianceBandit::step(int arm_index, Rng& rng) const {
  const auto& outcomes = arm(arm_index);
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (const auto& outcome : outcomes) {
    cumulative += outcome.probability;
    if (u < cumulative) return outcome.value;
  }
  return outcomes.back().value;  // guards rounding in the cumulative sum
}

double VarianceBandit::arm_mean(int index) const {
  double mean = 0.0;
  for (const auto& outcome : arm(index)) mean += outcome.value * outcome.probability;
  return mean;
}

QuantileDistribution VarianceBandit::true_quantiles(int index, int n) const {
  if (n < 1) throw std::invalid_argument("VarianceBandit: quantile count must be positive");
  const auto& outcomes = arm(index);
  std::vector<double> quantiles(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double tau = (2.0 * i + 1.0) / (2.0 * n);
    // inf{ y : tau <= F(y) } over the discrete CDF
    double cumulative = 0.0;
    double q = outcomes.back().value;
    for (const auto& outcome : outcomes) {
      cumulative += outcome.probability;
      if (tau <= cumulative) {
        q = outcome.value;
        break;
      }
    }
    quantiles[static_cast<std::size_t>(i)] = q;
  }
  return QuantileDistribution(std::move(quantiles));
}

}  // namespace riskrl::envs
