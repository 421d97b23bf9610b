#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mdpc/qlearning.hpp"
#include "mdpc/solve.hpp"

namespace mdpc {

// Bandit state over c source-policy arms plus the learning arm (id c).
// Weights cover all c+1 arms; pull counts and normalized-reward sums are
// tracked for the source arms only, which are the elimination candidates.
struct Exp3State {
  int c = 0;                      // number of source arms
  double beta = 0.0;
  std::vector<double> weights;    // size c+1
  std::vector<std::uint8_t> removed;  // size c+1; the learning arm is never removed
  std::vector<long> pulls;        // size c
  std::vector<double> z;          // size c, accumulated normalized rewards
  long t = 0;                     // episodes played
  int clip_warnings = 0;

  int learning_arm() const { return c; }
  int active_count() const;
  std::vector<int> active_arms() const;
};

Exp3State make_exp3_state(int n_sources, double beta);

// Default mixing rate min{1, sqrt((c+1) ln(c+1) / (T (e-1)))}, the usual
// EXP-3 schedule for a known episode budget.
double exp3_auto_beta(int n_sources, long t_horizon);

// p_i = (1-beta) w_i / sum_active(w) + beta / (active count); 0 for removed.
std::vector<double> arm_probabilities(const Exp3State& state);

// Affine map of a discounted return onto [0,1]: shift by R_min/(1-gamma),
// divide by DeltaR/(1-gamma). Out-of-range inputs are clipped and counted.
double normalize_return(double raw, double r_min, double r_max, double gamma,
                        int* clip_counter = nullptr);

// Importance-weighted exponential update of the pulled arm's weight.
void exp3_update(Exp3State& state, int arm, double normalized_reward);

// Hoeffding elimination sweep (call when t % l == 0): a source arm k is
// removed when some active source arm j beats it by eps = z_j/n_j - z_k/n_k
// with both eps/2 > sqrt(-ln(delta/2c) / (2 n)). Unpulled arms are skipped.
void elimination_check(Exp3State& state, double delta);

struct EpisodeRow {
  long episode = 0;
  int arm = 0;
  double raw_return = 0.0;
  double normalized_return = 0.0;
  std::vector<int> active_arms;
  double cumulative = 0.0;  // running sum of raw returns
};

struct LearningRecord {
  std::vector<EpisodeRow> rows;
  int clip_warnings = 0;

  double total_cumulative() const { return rows.empty() ? 0.0 : rows.back().cumulative; }
  double final_return() const { return rows.empty() ? 0.0 : rows.back().raw_return; }
};

struct TransferParams {
  double beta = 0.0;  // <= 0 selects exp3_auto_beta
  long t_episodes = 10000;
  int elimination_interval = 50;
  double delta = 0.1;
  int horizon = 200;
  QLearningConfig qlearn;
};

// Full Algorithm-1 loop: per episode pick an arm, run one episode (sources
// act through their fixed policy, the learning arm through a persistent
// Q-learning actor), update weights, periodically run eliminations.
// Episode simulation uses a per-episode child seed, so the zero-source run
// is episode-for-episode identical to standalone Q-learning.
LearningRecord exp3_transfer_run(const TabularMDP& target,
                                 std::span<const StationaryPolicy> sources,
                                 const TransferParams& params, std::uint64_t seed);

// learning-record CSV: header
// episode,arm,raw_return,normalized_return,active_arms,cumulative_discounted_reward
std::string learning_record_csv(const LearningRecord& record);
LearningRecord parse_learning_record_csv(std::istream& in);
LearningRecord load_learning_record_csv(const std::string& path);
void save_learning_record_csv(const std::string& path, const LearningRecord& record);

}  // namespace mdpc
