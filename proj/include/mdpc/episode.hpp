#pragma once

#include <cstdint>

#include "mdpc/mdp.hpp"
#include "mdpc/rng.hpp"

namespace mdpc {

// One agent driving episodes. A stationary policy ignores the callbacks; a
// learner keeps state across episodes within one run.
class EpisodicActor {
 public:
  virtual ~EpisodicActor() = default;
  virtual int act(int state, Rng& rng) = 0;
  virtual void begin_episode() {}
  virtual void observe(int state, int action, double reward, int next_state, bool terminal) {
    (void)state, (void)action, (void)reward, (void)next_state, (void)terminal;
  }
};

class PolicyActor final : public EpisodicActor {
 public:
  explicit PolicyActor(const StationaryPolicy& pi) : pi_(&pi) {}
  int act(int state, Rng&) override { return pi_->action[static_cast<std::size_t>(state)]; }

 private:
  const StationaryPolicy* pi_;
};

// Runs one episode from the initial state. Rewards are discounted gamma^n
// with the first reward at exponent 0. The episode ends on entering an
// absorbing state or after `horizon` steps. Per-step draw order: action,
// next state, reward noise (noise drawn only when the half-width is > 0).
EpisodeResult run_episode(const TabularMDP& mdp, EpisodicActor& actor, int horizon, Rng& rng,
                          bool record_trajectory = false);
EpisodeResult run_episode(const TabularMDP& mdp, EpisodicActor& actor, int horizon,
                          std::uint64_t seed, bool record_trajectory = false);

namespace detail {
int sample_next_state(const TabularMDP& mdp, int s, int a, Rng& rng);
double realize_reward(const TabularMDP& mdp, int s, int a, Rng& rng);
}  // namespace detail

}  // namespace mdpc
