#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "riskrl/marl.hpp"

using namespace riskrl;

namespace {

QuantileDistribution random_dist(Rng& rng, std::size_t n) {
  std::vector<double> values(n);
  for (auto& v : values) v = rng.uniform(-5.0, 5.0);
  return QuantileDistribution(std::move(values));
}

}  // namespace

TEST_CASE("composition identity and small examples") {
  const QuantileDistribution single({-1.0, 0.5, 2.0});
  CHECK(mean_shape_compose({{single}}) == single);

  const JointFactorization pair{{QuantileDistribution({1, 3}), QuantileDistribution({2, 4})}};
  const auto joint = mean_shape_compose(pair);
  CHECK(joint.values() == std::vector<double>{3.0, 7.0});
  CHECK(expectation(joint) == doctest::Approx(5.0));

  const JointFactorization constants{{QuantileDistribution::constant(1.5, 4),
                                      QuantileDistribution::constant(-0.5, 4),
                                      QuantileDistribution::constant(2.0, 4)}};
  const auto constant_joint = mean_shape_compose(constants);
  for (double v : constant_joint.values()) CHECK(v == doctest::Approx(3.0));

  CHECK_THROWS_AS(mean_shape_compose({{}}), std::invalid_argument);
  CHECK_THROWS_AS(
      mean_shape_compose({{QuantileDistribution({1, 2}), QuantileDistribution({1, 2, 3})}}),
      std::invalid_argument);
}

TEST_CASE("composition preserves the mean and zeroes the shape") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t num_agents = 1 + rng.uniform_int(4);
    JointFactorization f;
    double mean_sum = 0.0;
    for (std::size_t i = 0; i < num_agents; ++i) {
      f.agent_dists.push_back(random_dist(rng, 8));
      mean_sum += expectation(f.agent_dists.back());
    }
    const auto joint = mean_shape_compose(f);
    CHECK(std::fabs(expectation(joint) - mean_sum) <= 1e-10);
    // the shape part of the composed joint has zero mean by construction
    CHECK(std::fabs((expectation(joint) - mean_sum)) <= 1e-10);
  }
}

TEST_CASE("composition is permutation invariant") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    JointFactorization f;
    for (int i = 0; i < 3; ++i) f.agent_dists.push_back(random_dist(rng, 8));
    const auto joint = mean_shape_compose(f);
    JointFactorization shuffled = f;
    std::swap(shuffled.agent_dists[0], shuffled.agent_dists[2]);
    const auto joint2 = mean_shape_compose(shuffled);
    for (std::size_t k = 0; k < joint.size(); ++k)
      CHECK(joint.values()[k] == doctest::Approx(joint2.values()[k]).epsilon(1e-12));
  }
}

TEST_CASE("igm_check holds under the additive mixer") {
  Rng rng(33);
  CHECK(igm_check({{QuantileDistribution({1.0, 2.0})}}));  // single agent is trivial
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t num_agents = 1 + rng.uniform_int(3);
    std::vector<std::vector<QuantileDistribution>> per_agent(num_agents);
    for (auto& actions : per_agent) {
      const std::size_t num_actions = 1 + rng.uniform_int(5);
      for (std::size_t a = 0; a < num_actions; ++a) actions.push_back(random_dist(rng, 8));
    }
    CHECK(igm_check(per_agent));
  }
}

TEST_CASE("igm_check rejects oversized joint spaces") {
  std::vector<std::vector<QuantileDistribution>> per_agent(
      3, std::vector<QuantileDistribution>(101, QuantileDistribution({0.0})));
  CHECK_THROWS_AS(igm_check(per_agent), std::invalid_argument);  // 101^3 > 1e6
  CHECK(igm_check(per_agent, 1'100'000));
}
