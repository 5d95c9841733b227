#include "riskrl/marl.hpp"

#include <stdexcept>

namespace riskrl {

QuantileDistribution mean_shape_compose(const JointFactorization& f) {
  if (f.agent_dists.empty())
    throw std::invalid_argument("mean_shape_compose: need at least one agent");
  if (f.agent_dists.size() == 1) return f.agent_dists.front();  // decomposition identity
  const std::size_t n = f.agent_dists.front().size();
  for (const auto& dist : f.agent_dists) {
    if (dist.size() != n)
      throw std::invalid_argument("mean_shape_compose: agents must share the quantile count");
  }

  std::vector<double> means(f.agent_dists.size());
  double mixed_mean = 0.0;  // additive psi
  for (std::size_t i = 0; i < f.agent_dists.size(); ++i) {
    means[i] = expectation(f.agent_dists[i]);
    mixed_mean += means[i];
  }

  std::vector<double> joint(n);
  for (std::size_t k = 0; k < n; ++k) {
    double shape = 0.0;
    for (std::size_t i = 0; i < f.agent_dists.size(); ++i)
      shape += f.agent_dists[i].values()[k] - means[i];
    joint[k] = mixed_mean + shape;
  }
  // the constructor restores sortedness; a no-op for the additive mixer
  return QuantileDistribution(std::move(joint));
}

bool igm_check(const std::vector<std::vector<QuantileDistribution>>& per_agent_action_dists,
               std::size_t enumeration_cap) {
  if (per_agent_action_dists.empty()) throw std::invalid_argument("igm_check: need agents");
  const std::size_t num_agents = per_agent_action_dists.size();

  std::size_t n = 0;
  std::size_t joint_size = 1;
  for (const auto& actions : per_agent_action_dists) {
    if (actions.empty()) throw std::invalid_argument("igm_check: agent with no actions");
    for (const auto& dist : actions) {
      if (n == 0) n = dist.size();
      if (dist.size() != n)
        throw std::invalid_argument("igm_check: all distributions must share the quantile count");
    }
    if (joint_size > enumeration_cap / actions.size())
      throw std::invalid_argument("igm_check: joint action space exceeds enumeration cap");
    joint_size *= actions.size();
  }

  // per-agent greedy actions by expectation, ties to lowest index
  std::vector<std::size_t> per_agent_greedy(num_agents, 0);
  for (std::size_t i = 0; i < num_agents; ++i) {
    double best = expectation(per_agent_action_dists[i][0]);
    for (std::size_t a = 1; a < per_agent_action_dists[i].size(); ++a) {
      const double value = expectation(per_agent_action_dists[i][a]);
      if (value > best) {
        best = value;
        per_agent_greedy[i] = a;
      }
    }
  }

  // enumerate the joint space in lexicographic order (agent 0 most
  // significant), so "first strict maximum" is the lowest-index tie-break
  std::vector<std::size_t> indices(num_agents, 0);
  std::vector<std::size_t> best_tuple;
  double best_value = 0.0;
  JointFactorization f;
  f.agent_dists.reserve(num_agents);
  for (std::size_t count = 0; count < joint_size; ++count) {
    f.agent_dists.clear();
    for (std::size_t i = 0; i < num_agents; ++i)
      f.agent_dists.push_back(per_agent_action_dists[i][indices[i]]);
    const double value = expectation(mean_shape_compose(f));
    if (best_tuple.empty() || value > best_value) {
      best_value = value;
      best_tuple = indices;
    }
    // increment mixed-radix counter, last agent fastest
    for (std::size_t i = num_agents; i-- > 0;) {
      if (++indices[i] < per_agent_action_dists[i].size()) break;
      indices[i] = 0;
    }
  }

  return best_tuple == per_agent_greedy;
}

}  // namespace riskrl
