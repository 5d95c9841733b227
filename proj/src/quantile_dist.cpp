#include "riskrl/quantile_dist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskrl {

Fraction::Fraction(double tau) : tau_(tau) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw std::invalid_argument("Fraction: tau must be in [0, 1]");
}

QuantileDistribution::QuantileDistribution(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty())
    throw std::invalid_argument("QuantileDistribution: need at least one value");
  for (double v : values_) {
    if (!std::isfinite(v))
      throw std::invalid_argument("QuantileDistribution: values must be finite");
  }
  std::sort(values_.begin(), values_.end());
}

QuantileDistribution QuantileDistribution::constant(double value, int n) {
  if (n < 1) throw std::invalid_argument("QuantileDistribution::constant: n must be positive");
  return QuantileDistribution(std::vector<double>(static_cast<std::size_t>(n), value));
}

double QuantileDistribution::midpoint_fraction(std::size_t i) const {
  return (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(values_.size()));
}

double expectation(std::span<const double> sorted_values) {
  double acc = 0.0;
  for (double v : sorted_values) acc += v;
  return acc / static_cast<double>(sorted_values.size());
}

double expectation(const QuantileDistribution& dist) { return expectation(dist.span()); }

double quantile_at(std::span<const double> sorted_values, double tau) {
  const std::size_t n = sorted_values.size();
  if (tau <= 0.0) return sorted_values.front();
  std::size_t i = static_cast<std::size_t>(std::ceil(tau * static_cast<double>(n)));
  if (i < 1) i = 1;
  if (i > n) i = n;
  return sorted_values[i - 1];
}

double quantile_at(const QuantileDistribution& dist, Fraction tau) {
  return quantile_at(dist.span(), tau.value());
}

double interval_expectation(std::span<const double> sorted_values, const RiskInterval& interval) {
  const std::size_t n = sorted_values.size();
  const double nd = static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = static_cast<double>(i) / nd;
    if (lo >= interval.beta) break;
    const double hi = static_cast<double>(i + 1) / nd;
    const double overlap = std::min(hi, interval.beta) - std::max(lo, interval.alpha);
    if (overlap > 0.0) acc += sorted_values[i] * overlap;
  }
  return acc / interval.width();
}

double interval_expectation(const QuantileDistribution& dist, const RiskInterval& interval) {
  return interval_expectation(dist.span(), interval);
}

double mc_interval_expectation(const QuantileDistribution& dist, const RiskInterval& interval,
                               std::size_t num_samples, Rng& rng) {
  if (num_samples == 0)
    throw std::invalid_argument("mc_interval_expectation: need at least one sample");
  const std::span<const double> values = dist.span();
  double acc = 0.0;
  for (std::size_t k = 0; k < num_samples; ++k)
    acc += quantile_at(values, rng.uniform(interval.alpha, interval.beta));
  return acc / static_cast<double>(num_samples);
}

double mc_interval_expectation_blocked(const QuantileDistribution& dist,
                                       const RiskInterval& interval, std::size_t num_samples,
                                       std::uint64_t seed, bool parallel) {
  if (num_samples == 0)
    throw std::invalid_argument("mc_interval_expectation_blocked: need at least one sample");
  constexpr std::size_t kBlock = 8192;
  const std::size_t num_blocks = (num_samples + kBlock - 1) / kBlock;
  std::vector<double> partial(num_blocks, 0.0);
  const std::span<const double> values = dist.span();

#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(num_blocks); ++b) {
    Rng block_rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
    const std::size_t end = std::min(num_samples, begin + kBlock);
    double acc = 0.0;
    for (std::size_t k = begin; k < end; ++k)
      acc += quantile_at(values, block_rng.uniform(interval.alpha, interval.beta));
    partial[static_cast<std::size_t>(b)] = acc;
  }

  double total = 0.0;
  for (double p : partial) total += p;  // fixed reduction order
  return total / static_cast<double>(num_samples);
}

double wasserstein(const QuantileDistribution& a, const QuantileDistribution& b, int order) {
  if (a.size() != b.size())
    throw std::invalid_argument("wasserstein: distributions must have the same quantile count");
  if (order != 1 && order != 2)
    throw std::invalid_argument("wasserstein: order must be 1 or 2");
  const std::size_t n = a.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(a.values()[i] - b.values()[i]);
    acc += (order == 1) ? d : d * d;
  }
  acc /= static_cast<double>(n);
  return (order == 1) ? acc : std::sqrt(acc);
}

double quantile_huber_loss(std::span<const double> pred, std::span<const double> target_samples,
                           double kappa, std::span<double> grad_out) {
  if (kappa <= 0.0) throw std::invalid_argument("quantile_huber_loss: kappa must be positive");
  if (target_samples.empty())
    throw std::invalid_argument("quantile_huber_loss: need at least one target sample");
  if (grad_out.size() != pred.size())
    throw std::invalid_argument("quantile_huber_loss: grad_out size must match pred");

  const std::size_t n = pred.size();
  const std::size_t m = target_samples.size();
  const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(m));
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n));
    double grad_acc = 0.0;
    for (double t : target_samples) {
      const double u = t - pred[i];
      const double weight = (u < 0.0) ? (1.0 - tau) : tau;
      const double au = std::fabs(u);
      double huber, dhuber;  // L_kappa(u) and dL/du
      if (au <= kappa) {
        huber = 0.5 * u * u;
        dhuber = u;
      } else {
        huber = kappa * (au - 0.5 * kappa);
        dhuber = (u < 0.0) ? -kappa : kappa;
      }
      loss += weight * huber / kappa;
      grad_acc -= weight * dhuber / kappa;  // d u / d pred_i = -1
    }
    grad_out[i] = grad_acc * norm;
  }
  return loss * norm;
}

QuantileHuberResult quantile_huber_loss(const QuantileDistribution& pred,
                                        std::span<const double> target_samples, double kappa) {
  QuantileHuberResult result;
  result.grad.resize(pred.size());
  result.loss = quantile_huber_loss(pred.span(), target_samples, kappa, result.grad);
  return result;
}

}  // namespace riskrl
