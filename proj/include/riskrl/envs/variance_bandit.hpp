#pragma once

#include <vector>

#include "riskrl/quantile_dist.hpp"
#include "riskrl/rng.hpp"

namespace riskrl::envs {

struct DiscreteOutcome {
  double value;
  double probability;
};

// Single-step environment whose arms are finite discrete reward
// distributions. The default instance pairs a zero-variance arm with a
// high-variance arm of equal mean, so risk levels are separable by
// construction.
class VarianceBandit {
 public:
  explicit VarianceBandit(std::vector<std::vector<DiscreteOutcome>> arms);

  static VarianceBandit default_instance();

  static constexpr int kSafeArm = 0;
  static constexpr int kRiskyArm = 1;

  int num_arms() const { return static_cast<int>(arms_.size()); }
  const std::vector<DiscreteOutcome>& arm(int index) const;

  // Samples a reward from the arm's distribution; every pull is terminal.
  double step(int arm, Rng& rng) const;

  double arm_mean(int index) const;

  // Exact quantiles of an arm's reward distribution at the n midpoint
  // fractions (2i - 1) / (2n).
  QuantileDistribution true_quantiles(int index, int n) const;

 private:
  std::vector<std::vector<DiscreteOutcome>> arms_;
};

}  // namespace riskrl::envs
