#pragma once

#include <stdexcept>

namespace riskrl {

// Sub-interval [alpha, beta] of [0, 1] from which quantile fractions are
// drawn. Restricting the draw to low fractions values the worst cases of a
// return distribution, high fractions the best cases.
struct RiskInterval {
  double alpha = 0.0;
  double beta = 1.0;

  RiskInterval() = default;
  RiskInterval(double a, double b) : alpha(a), beta(b) {
    if (!(0.0 <= alpha && alpha < beta && beta <= 1.0))
      throw std::invalid_argument("RiskInterval: need 0 <= alpha < beta <= 1");
  }

  double width() const { return beta - alpha; }

  bool operator==(const RiskInterval&) const = default;
};

}  // namespace riskrl
