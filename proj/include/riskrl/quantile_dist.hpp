#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "riskrl/risk_interval.hpp"
#include "riskrl/rng.hpp"

namespace riskrl {

// Quantile fraction, a point in [0, 1] indexing the inverse CDF.
class Fraction {
 public:
  explicit Fraction(double tau);
  double value() const { return tau_; }

 private:
  double tau_;
};

// Return distribution represented as a uniform-weight mixture of N Dirac
// atoms. Values are sorted non-decreasing on construction; the implied
// quantile midpoint fractions are (2i - 1) / (2N) for i = 1..N.
class QuantileDistribution {
 public:
  explicit QuantileDistribution(std::vector<double> values);

  static QuantileDistribution constant(double value, int n = 8);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  std::span<const double> span() const { return values_; }

  // midpoint fraction of atom i, 0-based: (2i + 1) / (2N)
  double midpoint_fraction(std::size_t i) const;

  bool operator==(const QuantileDistribution&) const = default;

 private:
  std::vector<double> values_;
};

// Span overloads are the workhorses; they operate on sorted quantile values
// in place (e.g. rows of a tabular learner) without copying.

double expectation(std::span<const double> sorted_values);
double expectation(const QuantileDistribution& dist);

// Piecewise-constant inverse CDF: values_i for tau in ((i-1)/N, i/N],
// values_1 at tau = 0.
double quantile_at(std::span<const double> sorted_values, double tau);
double quantile_at(const QuantileDistribution& dist, Fraction tau);

// Exact mean of the inverse CDF over [alpha, beta], in closed form from the
// overlap of each quantile bin with the interval.
double interval_expectation(std::span<const double> sorted_values, const RiskInterval& interval);
double interval_expectation(const QuantileDistribution& dist, const RiskInterval& interval);

// Monte Carlo estimate of interval_expectation: mean of the inverse CDF at
// num_samples fractions drawn uniformly from the interval. Unbiased.
double mc_interval_expectation(const QuantileDistribution& dist, const RiskInterval& interval,
                               std::size_t num_samples, Rng& rng);

// Block-decomposed Monte Carlo estimate. Each fixed-size block draws from its
// own seed-derived stream and partial sums are reduced in block order, so the
// result is bitwise identical for any thread count. Runs the blocks under
// OpenMP when parallel is set.
double mc_interval_expectation_blocked(const QuantileDistribution& dist,
                                       const RiskInterval& interval, std::size_t num_samples,
                                       std::uint64_t seed, bool parallel);

// p-Wasserstein distance between two equal-size uniform mixtures, p in {1, 2}.
double wasserstein(const QuantileDistribution& a, const QuantileDistribution& b, int order);

// Quantile-Huber loss of a predicted quantile vector against target samples:
//   loss = (1 / (N*M)) sum_i sum_j |tau_i - 1{u<0}| * L_kappa(u) / kappa,
// with u = t_j - pred_i and L_kappa the Huber function. Writes the gradient
// with respect to pred into grad_out (same length as pred).
double quantile_huber_loss(std::span<const double> pred, std::span<const double> target_samples,
                           double kappa, std::span<double> grad_out);

struct QuantileHuberResult {
  double loss;
  std::vector<double> grad;
};

QuantileHuberResult quantile_huber_loss(const QuantileDistribution& pred,
                                        std::span<const double> target_samples, double kappa);

}  // namespace riskrl
