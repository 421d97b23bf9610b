#pragma once

#include <cstdint>
#include <span>

#include "mdpc/exp3.hpp"

namespace mdpc {

struct PolicyReuseParams {
  double tau = 1.0;           // initial softmax temperature
  double tau_decay = 0.995;   // multiplicative per-episode decay
  long t_episodes = 10000;
  int horizon = 200;
  QLearningConfig qlearn;
};

// Fernandez-Veloso-style baseline: per episode a candidate (source policy or
// epsilon-greedy Q-learning) is drawn by softmax over average observed
// returns; within the episode the Q-learning action probability ramps
// linearly from 0 to 1. The Q-table is shared across episodes, and every
// step updates it. Reuses the learning-record format; arm c is Q-learning.
LearningRecord policy_reuse_run(const TabularMDP& target,
                                std::span<const StationaryPolicy> sources,
                                const PolicyReuseParams& params, std::uint64_t seed);

}  // namespace mdpc
