#include "mdpc/episode.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdpc {

namespace detail {

int sample_next_state(const TabularMDP& mdp, int s, int a, Rng& rng) {
  const TransitionRow& row = mdp.row(s, a);
  if (row.size() == 1) return row[0].state;
  const double u = rng.next_double();
  double acc = 0.0;
  for (const auto& e : row) {
    acc += e.prob;
    if (u < acc) return e.state;
  }
  return row.back().state;  // guards against rounding in the cumulative sum
}

double realize_reward(const TabularMDP& mdp, int s, int a, Rng& rng) {
  const std::size_t idx = mdp.sa_index(s, a);
  const double w = mdp.reward_noise[idx];
  if (w == 0.0) return mdp.reward[idx];
  const double r = mdp.reward[idx] + rng.uniform(-w, w);
  return std::clamp(r, mdp.r_min, mdp.r_max);
}

}  // namespace detail

EpisodeResult run_episode(const TabularMDP& mdp, EpisodicActor& actor, int horizon, Rng& rng,
                          bool record_trajectory) {
  if (horizon < 1) throw std::invalid_argument("run_episode: horizon must be >= 1");
  actor.begin_episode();
  EpisodeResult result;
  int s = mdp.initial_state;
  double discount = 1.0;
  while (result.steps < horizon && !mdp.absorbing(s)) {
    const int a = actor.act(s, rng);
    const int s_next = detail::sample_next_state(mdp, s, a, rng);
    const double r = detail::realize_reward(mdp, s, a, rng);
    const bool terminal = mdp.absorbing(s_next);
    actor.observe(s, a, r, s_next, terminal);
    result.discounted_return += discount * r;
    discount *= mdp.gamma;
    ++result.steps;
    if (record_trajectory) result.trajectory.push_back({s, a, r});
    s = s_next;
  }
  return result;
}

EpisodeResult run_episode(const TabularMDP& mdp, EpisodicActor& actor, int horizon,
                          std::uint64_t seed, bool record_trajectory) {
  Rng rng(seed);
  return run_episode(mdp, actor, horizon, rng, record_trajectory);
}

}  // namespace mdpc
