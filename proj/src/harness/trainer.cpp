#include "riskrl/harness/trainer.hpp"

#include <stdexcept>

namespace riskrl::harness {

double joint_qr_update(std::vector<QuantileTable>& tables, const JointTransition& transition,
                       const LearnerConfig& cfg) {
  if (transition.actors.empty())
    throw std::invalid_argument("joint_qr_update: need at least one acting agent");
  if (!transition.terminal && transition.successors.empty())
    throw std::invalid_argument("joint_qr_update: non-terminal transition needs successors");

  JointFactorization pred;
  pred.agent_dists.reserve(transition.actors.size());
  for (const auto& actor : transition.actors)
    pred.agent_dists.push_back(
        tables.at(static_cast<std::size_t>(actor.agent)).distribution(actor.state, actor.action));
  const QuantileDistribution joint_pred = mean_shape_compose(pred);

  std::vector<double> targets;
  if (transition.terminal) {
    targets.push_back(transition.reward);
  } else {
    JointFactorization next;
    next.agent_dists.reserve(transition.successors.size());
    for (const auto& successor : transition.successors) {
      auto& table = tables.at(static_cast<std::size_t>(successor.agent));
      const int greedy =
          cfg.bootstrap_interval
              ? [&] {
                  int best = successor.legal.at(0);
                  double best_value =
                      table.action_interval_expectation(successor.next_state, best,
                                                        *cfg.bootstrap_interval);
                  for (std::size_t k = 1; k < successor.legal.size(); ++k) {
                    const double v = table.action_interval_expectation(
                        successor.next_state, successor.legal[k], *cfg.bootstrap_interval);
                    if (v > best_value || (v == best_value && successor.legal[k] < best)) {
                      best = successor.legal[k];
                      best_value = v;
                    }
                  }
                  return best;
                }()
              : greedy_target_action(table, successor.next_state, successor.legal);
      next.agent_dists.push_back(table.distribution(successor.next_state, greedy));
    }
    const QuantileDistribution joint_next = mean_shape_compose(next);
    targets.reserve(joint_next.size());
    for (double v : joint_next.values()) targets.push_back(transition.reward + cfg.gamma * v);
  }

  const QuantileHuberResult result = quantile_huber_loss(joint_pred, targets, cfg.kappa);

  // additive mixer: d joint_k / d agent value_{i,k} = 1 for every actor
  for (const auto& actor : transition.actors) {
    auto& table = tables.at(static_cast<std::size_t>(actor.agent));
    auto slice = table.mutable_values(actor.state, actor.action);
    for (std::size_t k = 0; k < slice.size(); ++k) slice[k] -= cfg.lr * result.grad[k];
    table.sort_values(actor.state, actor.action);
  }
  return result.loss;
}

}  // namespace riskrl::harness
