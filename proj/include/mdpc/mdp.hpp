#pragma once

#include <cstdint>
#include <vector>

namespace mdpc {

struct TransitionEntry {
  int state;
  double prob;
};

// One (s,a) transition row, sparse: entries sorted by state, probs > 0,
// summing to 1 within 1e-9.
using TransitionRow = std::vector<TransitionEntry>;

// Finite MDP with expected rewards R(s,a) and optional uniform reward noise.
// Construct the fields, then call validate() before use; it checks the
// invariants and caches the absorbing-state mask.
class TabularMDP {
 public:
  int n_states = 0;
  int n_actions = 0;
  double gamma = 0.9;
  int initial_state = 0;
  double r_min = 0.0;
  double r_max = 0.0;
  std::vector<double> reward;        // (s,a) -> expected reward
  std::vector<double> reward_noise;  // (s,a) -> uniform half-width, 0 = deterministic
  std::vector<TransitionRow> rows;   // (s,a) -> sparse transition row

  std::size_t sa_index(int s, int a) const {
    return static_cast<std::size_t>(s) * static_cast<std::size_t>(n_actions) + static_cast<std::size_t>(a);
  }
  const TransitionRow& row(int s, int a) const { return rows[sa_index(s, a)]; }
  double reward_mean(int s, int a) const { return reward[sa_index(s, a)]; }

  // A state is absorbing when every action self-loops with zero reward and
  // zero noise; episodes terminate on entering one.
  bool absorbing(int s) const { return absorbing_[static_cast<std::size_t>(s)] != 0; }

  // Largest magnitude a value function can take: max(|r_min|,|r_max|)/(1-gamma).
  double value_bound() const;

  // Throws std::invalid_argument describing the first violated invariant.
  void validate();

 private:
  std::vector<std::uint8_t> absorbing_;
};

bool same_spaces(const TabularMDP& a, const TabularMDP& b);

struct StationaryPolicy {
  std::vector<int> action;  // per-state action index
};

struct ValueFunction {
  std::vector<double> v;
};

struct TrajectoryStep {
  int state;
  int action;
  double reward;
};

struct EpisodeResult {
  double discounted_return = 0.0;
  int steps = 0;
  std::vector<TrajectoryStep> trajectory;  // filled only when requested
};

// FNV-1a over the canonical serialized form; used to key distance caches.
std::uint64_t content_hash(const TabularMDP& mdp);

}  // namespace mdpc
