#pragma once

#include <vector>

#include "mdpc/episode.hpp"

namespace mdpc {

struct QLearningConfig {
  double alpha = 0.5;          // learning rate, (0,1]
  double epsilon = 0.2;        // initial exploration rate, [0,1]
  double epsilon_decay = 0.995;  // multiplicative per-episode decay
};

// Tabular Q-learning behind the episodic-actor interface. The Q-table starts
// at zero and persists across episodes within one run. Epsilon decays once
// per started episode.
class QLearningActor final : public EpisodicActor {
 public:
  QLearningActor(int n_states, int n_actions, double gamma, const QLearningConfig& cfg);

  int act(int state, Rng& rng) override;
  void begin_episode() override;
  void observe(int state, int action, double reward, int next_state, bool terminal) override;

  StationaryPolicy greedy_action_policy() const;
  const std::vector<double>& q_table() const { return q_; }
  double epsilon() const { return epsilon_; }
  long episodes_started() const { return episodes_; }

 private:
  std::size_t idx(int s, int a) const {
    return static_cast<std::size_t>(s) * static_cast<std::size_t>(n_actions_) + static_cast<std::size_t>(a);
  }
  int greedy_action(int s) const;

  int n_states_;
  int n_actions_;
  double gamma_;
  double alpha_;
  double epsilon_;
  double epsilon_decay_;
  long episodes_ = 0;
  std::vector<double> q_;
};

}  // namespace mdpc
