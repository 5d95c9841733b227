// Test-only oracles, independent of the library's closed-form paths: Riemann
// integration of the inverse CDF, central finite differences for gradients,
// and value iteration on explicit MDPs.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "riskrl/quantile_dist.hpp"

namespace riskrl::test {

// Midpoint Riemann estimate of the mean of the inverse CDF over [lo, hi].
inline double riemann_interval_mean(const QuantileDistribution& dist, double lo, double hi,
                                    std::size_t points) {
  const double h = (hi - lo) / static_cast<double>(points);
  double acc = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double tau = lo + (static_cast<double>(k) + 0.5) * h;
    acc += quantile_at(dist, Fraction(tau));
  }
  return acc / static_cast<double>(points);
}

// Midpoint Riemann estimate of ( integral_0^1 |Fa^-1 - Fb^-1|^p dtau )^(1/p).
inline double riemann_wasserstein(const QuantileDistribution& a, const QuantileDistribution& b,
                                  int order, std::size_t points) {
  const double h = 1.0 / static_cast<double>(points);
  double acc = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double tau = (static_cast<double>(k) + 0.5) * h;
    const double d = std::fabs(quantile_at(a, Fraction(tau)) - quantile_at(b, Fraction(tau)));
    acc += (order == 1) ? d : d * d;
  }
  acc *= h;
  return (order == 1) ? acc : std::sqrt(acc);
}

// Central finite differences of the quantile-Huber loss with respect to the
// predicted quantile values.
inline std::vector<double> finite_diff_huber_grad(const std::vector<double>& pred,
                                                  const std::vector<double>& targets,
                                                  double kappa, double step) {
  std::vector<double> grad(pred.size());
  std::vector<double> scratch(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    auto loss_at = [&](double value) {
      std::vector<double> p = pred;
      p[i] = value;
      return quantile_huber_loss(std::span<const double>(p), targets, kappa, scratch);
    };
    grad[i] = (loss_at(pred[i] + step) - loss_at(pred[i] - step)) / (2.0 * step);
  }
  return grad;
}

// Explicit deterministic MDP: next[s][a], reward[s][a], terminal[s][a].
struct TinyMdp {
  int num_states = 0;
  int num_actions = 0;
  std::vector<std::vector<int>> next;
  std::vector<std::vector<double>> reward;
  std::vector<std::vector<bool>> terminal;
};

struct ValueIterationResult {
  std::vector<double> state_value;
  std::vector<int> greedy_action;
};

inline ValueIterationResult value_iteration(const TinyMdp& mdp, double gamma,
                                            int sweeps = 10'000) {
  ValueIterationResult result;
  result.state_value.assign(static_cast<std::size_t>(mdp.num_states), 0.0);
  result.greedy_action.assign(static_cast<std::size_t>(mdp.num_states), 0);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int s = 0; s < mdp.num_states; ++s) {
      double best = -1e300;
      int best_action = 0;
      for (int a = 0; a < mdp.num_actions; ++a) {
        const double value =
            mdp.reward[s][a] +
            (mdp.terminal[s][a] ? 0.0 : gamma * result.state_value[mdp.next[s][a]]);
        if (value > best) {
          best = value;
          best_action = a;
        }
      }
      result.state_value[static_cast<std::size_t>(s)] = best;
      result.greedy_action[static_cast<std::size_t>(s)] = best_action;
    }
  }
  return result;
}

// Pearson chi-square statistic against a uniform distribution over counts.
inline double chi_square_uniform(const std::vector<std::uint64_t>& counts) {
  if (counts.empty()) throw std::invalid_argument("chi_square_uniform: empty counts");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

}  // namespace riskrl::test
