#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "riskrl/risk.hpp"

using namespace riskrl;

TEST_CASE("risk profiles carry the named intervals") {
  CHECK(RiskProfile::averse().interval == RiskInterval(0.0, 0.25));
  CHECK(RiskProfile::neutral().interval == RiskInterval(0.0, 1.0));
  CHECK(RiskProfile::seeking().interval == RiskInterval(0.75, 1.0));
}

TEST_CASE("schedule endpoints and interior points") {
  const auto to_averse = RiskSchedule::seeking_to(RiskProfile::averse(), 10'000);
  CHECK(interval_at_step(to_averse, 0) == RiskInterval(0.75, 1.0));
  CHECK(interval_at_step(to_averse, 10'000) == RiskInterval(0.0, 0.25));
  CHECK(interval_at_step(to_averse, 123'456) == RiskInterval(0.0, 0.25));
  // phase boundary: alpha has finished decaying, beta has not started
  CHECK(interval_at_step(to_averse, 5'000) == RiskInterval(0.0, 1.0));

  const auto to_neutral = RiskSchedule::seeking_to(RiskProfile::neutral(), 10'000);
  CHECK(interval_at_step(to_neutral, 5'000).alpha == doctest::Approx(0.375));
  CHECK(interval_at_step(to_neutral, 5'000).beta == 1.0);
  CHECK(interval_at_step(to_neutral, 10'000) == RiskInterval(0.0, 1.0));

  CHECK_THROWS_AS(RiskSchedule::seeking_to(RiskProfile::seeking(), 10'000),
                  std::invalid_argument);
  CHECK_THROWS_AS(RiskSchedule::seeking_to(RiskProfile::averse(), 0), std::invalid_argument);
}

TEST_CASE("fixed schedules hold their interval") {
  for (const auto& profile :
       {RiskProfile::averse(), RiskProfile::neutral(), RiskProfile::seeking()}) {
    const auto schedule = RiskSchedule::fixed(profile);
    for (std::uint64_t t : {0ULL, 1ULL, 999ULL, 1000000ULL})
      CHECK(interval_at_step(schedule, t) == profile.interval);
  }
}

TEST_CASE("schedule sweep: validity, continuity, monotonicity") {
  const std::uint64_t steps = 10'000;
  const double max_slope = 0.75 / (static_cast<double>(steps) / 2.0);
  for (const auto& target : {RiskProfile::averse(), RiskProfile::neutral()}) {
    const auto schedule = RiskSchedule::seeking_to(target, steps);
    RiskInterval previous = interval_at_step(schedule, 0);
    for (std::uint64_t t = 0; t <= steps + 100; ++t) {
      const RiskInterval interval = interval_at_step(schedule, t);
      CHECK(interval.alpha >= 0.0);
      CHECK(interval.alpha < interval.beta);
      CHECK(interval.beta <= 1.0);
      if (t > 0) {
        CHECK(std::fabs(interval.alpha - previous.alpha) <= max_slope + 1e-12);
        CHECK(std::fabs(interval.beta - previous.beta) <= max_slope + 1e-12);
        CHECK(interval.alpha <= previous.alpha + 1e-15);  // alpha never increases
        if (target.kind == RiskKind::averse)
          CHECK(interval.beta <= previous.beta + 1e-15);
        else
          CHECK(interval.beta == previous.beta);
      }
      previous = interval;
    }
  }
}

TEST_CASE("epsilon schedule") {
  const EpsilonSchedule schedule(1.0, 0.05, 10'000);
  CHECK(epsilon_at_step(schedule, 0) == 1.0);
  CHECK(epsilon_at_step(schedule, 10'000) == 0.05);
  CHECK(epsilon_at_step(schedule, 1'000'000) == 0.05);
  CHECK(epsilon_at_step(schedule, 5'000) == doctest::Approx(0.525));
  CHECK(epsilon_at_step(EpsilonSchedule(0.3, 0.3, 0), 0) == 0.3);
  CHECK_THROWS_AS(EpsilonSchedule(0.05, 1.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(EpsilonSchedule(1.5, 0.05, 100), std::invalid_argument);
}

TEST_CASE("select_action risk separation on the two-arm example") {
  const std::vector<QuantileDistribution> arms{QuantileDistribution({1, 1, 1, 1}),
                                               QuantileDistribution({0, 0, 4, 4})};
  Rng rng(7);
  // averse: the safe arm's worst case beats the risky arm's
  CHECK(select_action(arms, RiskInterval(0.0, 0.25), 0.0, rng) == 0);
  // seeking: the risky arm's best case wins
  CHECK(select_action(arms, RiskInterval(0.75, 1.0), 0.0, rng) == 1);
  CHECK_THROWS_AS(select_action({}, RiskInterval(0, 1), 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(select_action(arms, RiskInterval(0, 1), 1.5, rng), std::invalid_argument);
}

TEST_CASE("select_action with epsilon 1 is uniform") {
  const std::vector<QuantileDistribution> arms{
      QuantileDistribution({5, 5}), QuantileDistribution({0, 0}), QuantileDistribution({1, 2}),
      QuantileDistribution({-3, 3})};
  Rng rng(17);
  std::vector<std::uint64_t> counts(arms.size(), 0);
  const int draws = 100'000;
  for (int k = 0; k < draws; ++k)
    ++counts[static_cast<std::size_t>(select_action(arms, RiskInterval(0, 1), 1.0, rng))];
  // chi-square with 3 dof; 16.27 is the 0.001 upper tail
  CHECK(test::chi_square_uniform(counts) < 16.27);
}

TEST_CASE("select_action invariances") {
  Rng rng(27);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<QuantileDistribution> arms;
    const std::size_t num_actions = 2 + rng.uniform_int(4);
    for (std::size_t a = 0; a < num_actions; ++a) {
      std::vector<double> values(8);
      for (auto& v : values) v = rng.uniform(-5.0, 5.0);
      arms.push_back(QuantileDistribution(std::move(values)));
    }
    const RiskInterval interval(rng.uniform(0.0, 0.4), rng.uniform(0.6, 1.0));

    Rng greedy_rng(0);
    const int chosen = select_action(arms, interval, 0.0, greedy_rng);

    // positive affine transform of every arm leaves the argmax unchanged
    const double scale = 0.1 + rng.uniform() * 5.0;
    const double shift = rng.uniform(-10.0, 10.0);
    std::vector<QuantileDistribution> transformed;
    for (const auto& arm : arms) {
      std::vector<double> values = arm.values();
      for (auto& v : values) v = scale * v + shift;
      transformed.push_back(QuantileDistribution(std::move(values)));
    }
    CHECK(select_action(transformed, interval, 0.0, greedy_rng) == chosen);

    // the neutral interval reproduces plain expectation-greedy selection
    int expectation_argmax = 0;
    double best = expectation(arms[0]);
    for (std::size_t a = 1; a < arms.size(); ++a) {
      const double value = expectation(arms[a]);
      if (value > best) {
        best = value;
        expectation_argmax = static_cast<int>(a);
      }
    }
    CHECK(select_action(arms, RiskInterval(0.0, 1.0), 0.0, greedy_rng) == expectation_argmax);
  }
}

TEST_CASE("select_action tie-break picks the lowest index") {
  const std::vector<QuantileDistribution> arms{QuantileDistribution({1.0, 2.0}),
                                               QuantileDistribution({1.0, 2.0}),
                                               QuantileDistribution({0.0, 3.0})};
  Rng rng(37);
  CHECK(select_action(arms, RiskInterval(0.0, 1.0), 0.0, rng) == 0);
}
