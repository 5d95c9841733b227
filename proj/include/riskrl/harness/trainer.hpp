#pragma once

#include <vector>

#include "riskrl/agent.hpp"
#include "riskrl/marl.hpp"

namespace riskrl::harness {

// Transition of the joint (team) distribution: agents alive when acting on
// the current side, agents alive afterwards on the bootstrap side.
struct JointTransition {
  struct Actor {
    int agent = 0;
    StateKey state = 0;
    int action = 0;
  };
  struct Successor {
    int agent = 0;
    StateKey next_state = 0;
    std::vector<int> legal;
  };
  std::vector<Actor> actors;
  double reward = 0.0;
  std::vector<Successor> successors;
  bool terminal = false;
};

// One distributional TD step on the additively mixed joint distribution. The
// joint is composed quantile-wise from the actors' current distributions and
// regressed toward reward + gamma * composed greedy next distribution; the
// joint gradient at quantile k lands unchanged on every actor's quantile k
// since the mixer is additive. Reduces to qr_update when one agent acts.
// Returns the joint quantile-Huber loss before the step.
double joint_qr_update(std::vector<QuantileTable>& tables, const JointTransition& transition,
                       const LearnerConfig& cfg);

}  // namespace riskrl::harness
