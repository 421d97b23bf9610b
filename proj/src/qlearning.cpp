#include "mdpc/qlearning.hpp"

#include <stdexcept>

namespace mdpc {

QLearningActor::QLearningActor(int n_states, int n_actions, double gamma,
                               const QLearningConfig& cfg)
    : n_states_(n_states),
      n_actions_(n_actions),
      gamma_(gamma),
      alpha_(cfg.alpha),
      epsilon_(cfg.epsilon),
      epsilon_decay_(cfg.epsilon_decay),
      q_(static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_actions), 0.0) {
  if (!(alpha_ > 0.0 && alpha_ <= 1.0))
    throw std::invalid_argument("qlearning: alpha must lie in (0,1]");
  if (!(epsilon_ >= 0.0 && epsilon_ <= 1.0))
    throw std::invalid_argument("qlearning: epsilon must lie in [0,1]");
  if (!(epsilon_decay_ > 0.0 && epsilon_decay_ <= 1.0))
    throw std::invalid_argument("qlearning: epsilon_decay must lie in (0,1]");
}

int QLearningActor::greedy_action(int s) const {
  int best_a = 0;
  double best = q_[idx(s, 0)];
  for (int a = 1; a < n_actions_; ++a) {
    const double q = q_[idx(s, a)];
    if (q > best) {
      best = q;
      best_a = a;
    }
  }
  return best_a;
}

int QLearningActor::act(int state, Rng& rng) {
  if (rng.next_double() < epsilon_) return rng.next_int(n_actions_);
  return greedy_action(state);
}

void QLearningActor::begin_episode() {
  if (episodes_ > 0) epsilon_ *= epsilon_decay_;
  ++episodes_;
}

void QLearningActor::observe(int state, int action, double reward, int next_state, bool terminal) {
  double target = reward;
  if (!terminal) {
    const double best_next = q_[idx(next_state, greedy_action(next_state))];
    target += gamma_ * best_next;
  }
  double& q = q_[idx(state, action)];
  q += alpha_ * (target - q);
}

StationaryPolicy QLearningActor::greedy_action_policy() const {
  StationaryPolicy pi;
  pi.action.resize(static_cast<std::size_t>(n_states_));
  for (int s = 0; s < n_states_; ++s) pi.action[static_cast<std::size_t>(s)] = greedy_action(s);
  return pi;
}

}  // namespace mdpc
