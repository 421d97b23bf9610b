#include "mdpc/policy_reuse.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mdpc/episode.hpp"

namespace mdpc {

namespace {

// softmax over avg returns; tau -> infinity degenerates to uniform
int softmax_pick(const std::vector<double>& scores, double tau, Rng& rng) {
  const std::size_t n = scores.size();
  double best = scores[0];
  for (double s : scores) best = std::max(best, s);
  std::vector<double> w(n, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::isinf(tau) ? 1.0 : std::exp((scores[i] - best) / tau);
    sum += w[i];
  }
  const double u = rng.next_double() * sum;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += w[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(n - 1);
}

}  // namespace

LearningRecord policy_reuse_run(const TabularMDP& target,
                                std::span<const StationaryPolicy> sources,
                                const PolicyReuseParams& params, std::uint64_t seed) {
  if (params.t_episodes < 1) throw std::invalid_argument("policy_reuse: T must be >= 1");
  if (params.horizon < 1) throw std::invalid_argument("policy_reuse: horizon must be >= 1");
  if (!(params.tau > 0.0)) throw std::invalid_argument("policy_reuse: tau must be > 0");

  const int c = static_cast<int>(sources.size());
  QLearningActor learner(target.n_states, target.n_actions, target.gamma, params.qlearn);
  Rng pick_rng(derive_seed(seed, "pr.pick"));

  std::vector<double> avg_return(static_cast<std::size_t>(c) + 1, 0.0);
  std::vector<long> uses(static_cast<std::size_t>(c) + 1, 0);
  double tau = params.tau;

  LearningRecord record;
  record.rows.reserve(static_cast<std::size_t>(params.t_episodes));
  double cumulative = 0.0;

  for (long t = 1; t <= params.t_episodes; ++t) {
    const int choice = c == 0 ? 0 : softmax_pick(avg_return, tau, pick_rng);
    const bool chose_qlearn = choice == c;

    Rng episode_rng(derive_seed(seed, "episode", static_cast<std::uint64_t>(t)));
    EpisodeResult episode;
    if (chose_qlearn) {
      episode = run_episode(target, learner, params.horizon, episode_rng);
    } else {
      // mixed exploration episode: psi ramps the Q-learning action
      // probability from 0 to 1 across the horizon
      learner.begin_episode();
      const StationaryPolicy& source = sources[static_cast<std::size_t>(choice)];
      int s = target.initial_state;
      double discount = 1.0;
      while (episode.steps < params.horizon && !target.absorbing(s)) {
        const double psi = params.horizon <= 1
                               ? 1.0
                               : std::min(1.0, static_cast<double>(episode.steps) /
                                                   static_cast<double>(params.horizon - 1));
        int a;
        if (episode_rng.next_double() < psi)
          a = learner.act(s, episode_rng);
        else
          a = source.action[static_cast<std::size_t>(s)];
        const int s_next = detail::sample_next_state(target, s, a, episode_rng);
        const double r = detail::realize_reward(target, s, a, episode_rng);
        const bool terminal = target.absorbing(s_next);
        learner.observe(s, a, r, s_next, terminal);
        episode.discounted_return += discount * r;
        discount *= target.gamma;
        ++episode.steps;
        s = s_next;
      }
    }

    auto& n = uses[static_cast<std::size_t>(choice)];
    auto& avg = avg_return[static_cast<std::size_t>(choice)];
    ++n;
    avg += (episode.discounted_return - avg) / static_cast<double>(n);
    tau *= params.tau_decay;

    cumulative += episode.discounted_return;
    EpisodeRow row;
    row.episode = t;
    row.arm = chose_qlearn ? c : choice;
    row.raw_return = episode.discounted_return;
    row.normalized_return = normalize_return(episode.discounted_return, target.r_min,
                                             target.r_max, target.gamma, &record.clip_warnings);
    for (int i = 0; i <= c; ++i) row.active_arms.push_back(i);
    row.cumulative = cumulative;
    record.rows.push_back(std::move(row));
  }
  return record;
}

}  // namespace mdpc
