#pragma once

#include <cstddef>
#include <vector>

#include "riskrl/quantile_dist.hpp"

namespace riskrl {

enum class MeanMixer { additive };

// Per-agent return distributions for the agents' chosen actions, plus the
// mixer applied to the per-agent expectations.
struct JointFactorization {
  std::vector<QuantileDistribution> agent_dists;
  MeanMixer psi = MeanMixer::additive;
};

// Mean-shape composition of the joint return distribution: the mixed
// per-agent expectations plus the quantile-index-aligned sum of the
// per-agent zero-mean shapes.
QuantileDistribution mean_shape_compose(const JointFactorization& f);

// Checks the individual-global-max property: the joint greedy action found
// by enumerating expectation(mean_shape_compose(...)) over the full joint
// action space must equal the stack of per-agent expectation argmaxes. Ties
// resolve to the lowest index on both sides.
bool igm_check(const std::vector<std::vector<QuantileDistribution>>& per_agent_action_dists,
               std::size_t enumeration_cap = 1'000'000);

}  // namespace riskrl
