#include "mdpc/exp3.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mdpc/episode.hpp"
#include "mdpc/mdp_io.hpp"

namespace mdpc {

int Exp3State::active_count() const {
  int n = 0;
  for (std::uint8_t r : removed)
    if (!r) ++n;
  return n;
}

std::vector<int> Exp3State::active_arms() const {
  std::vector<int> out;
  for (int i = 0; i <= c; ++i)
    if (!removed[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

Exp3State make_exp3_state(int n_sources, double beta) {
  if (n_sources < 0) throw std::invalid_argument("exp3: negative source count");
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("exp3: beta must lie in [0,1]");
  Exp3State s;
  s.c = n_sources;
  s.beta = beta;
  s.weights.assign(static_cast<std::size_t>(n_sources) + 1, 1.0);
  s.removed.assign(static_cast<std::size_t>(n_sources) + 1, 0);
  s.pulls.assign(static_cast<std::size_t>(n_sources), 0);
  s.z.assign(static_cast<std::size_t>(n_sources), 0.0);
  return s;
}

double exp3_auto_beta(int n_sources, long t_horizon) {
  const double e_minus_1 = std::exp(1.0) - 1.0;
  const double cp1 = static_cast<double>(n_sources) + 1.0;
  const double v = std::sqrt(cp1 * std::log(cp1) / (static_cast<double>(t_horizon) * e_minus_1));
  return std::min(1.0, v);
}

std::vector<double> arm_probabilities(const Exp3State& state) {
  const int active = state.active_count();
  if (active < 1) throw std::logic_error("exp3: no active arms");
  double sum_w = 0.0;
  for (int i = 0; i <= state.c; ++i)
    if (!state.removed[static_cast<std::size_t>(i)]) sum_w += state.weights[static_cast<std::size_t>(i)];
  std::vector<double> p(static_cast<std::size_t>(state.c) + 1, 0.0);
  for (int i = 0; i <= state.c; ++i) {
    if (state.removed[static_cast<std::size_t>(i)]) continue;
    p[static_cast<std::size_t>(i)] = (1.0 - state.beta) * state.weights[static_cast<std::size_t>(i)] / sum_w +
                                     state.beta / static_cast<double>(active);
  }
  return p;
}

double normalize_return(double raw, double r_min, double r_max, double gamma, int* clip_counter) {
  const double scale = (r_max - r_min) / (1.0 - gamma);
  const double shifted = raw - r_min / (1.0 - gamma);
  double x = scale > 0.0 ? shifted / scale : 0.0;
  if (x < 0.0 || x > 1.0) {
    if (clip_counter) ++*clip_counter;
    x = std::clamp(x, 0.0, 1.0);
  }
  return x;
}

void exp3_update(Exp3State& state, int arm, double normalized_reward) {
  if (arm < 0 || arm > state.c) throw std::invalid_argument("exp3: arm out of range");
  if (state.removed[static_cast<std::size_t>(arm)]) throw std::invalid_argument("exp3: updating a removed arm");
  if (!(normalized_reward >= 0.0 && normalized_reward <= 1.0))
    throw std::invalid_argument("exp3: normalized reward outside [0,1]");
  const double p = arm_probabilities(state)[static_cast<std::size_t>(arm)];
  const double x_hat = normalized_reward / p;
  state.weights[static_cast<std::size_t>(arm)] *=
      std::exp(state.beta * x_hat / (static_cast<double>(state.c) + 1.0));

  // common rescale keeps the weights representable; probabilities are
  // invariant to scaling the active weights together
  double max_w = 0.0;
  for (int i = 0; i <= state.c; ++i)
    if (!state.removed[static_cast<std::size_t>(i)])
      max_w = std::max(max_w, state.weights[static_cast<std::size_t>(i)]);
  if (max_w > 1e100) {
    for (int i = 0; i <= state.c; ++i)
      if (!state.removed[static_cast<std::size_t>(i)]) state.weights[static_cast<std::size_t>(i)] /= max_w;
  }
}

void elimination_check(Exp3State& state, double delta) {
  if (!(delta > 0.0 && delta <= 0.5)) throw std::invalid_argument("exp3: delta must lie in (0,0.5]");
  if (state.c < 1) return;
  const double log_term = -std::log(delta / (2.0 * static_cast<double>(state.c)));
  auto bound = [&](long n) { return std::sqrt(log_term / (2.0 * static_cast<double>(n))); };
  for (int k = 0; k < state.c; ++k) {
    if (state.removed[static_cast<std::size_t>(k)]) continue;
    if (state.pulls[static_cast<std::size_t>(k)] == 0) continue;
    const double mean_k = state.z[static_cast<std::size_t>(k)] / static_cast<double>(state.pulls[static_cast<std::size_t>(k)]);
    for (int j = 0; j < state.c; ++j) {
      if (j == k || state.removed[static_cast<std::size_t>(j)]) continue;
      if (state.pulls[static_cast<std::size_t>(j)] == 0) continue;
      const double mean_j = state.z[static_cast<std::size_t>(j)] / static_cast<double>(state.pulls[static_cast<std::size_t>(j)]);
      const double eps = mean_j - mean_k;
      if (eps <= 0.0) continue;
      if (eps / 2.0 > bound(state.pulls[static_cast<std::size_t>(j)]) &&
          eps / 2.0 > bound(state.pulls[static_cast<std::size_t>(k)])) {
        state.removed[static_cast<std::size_t>(k)] = 1;
        break;
      }
    }
  }
}

LearningRecord exp3_transfer_run(const TabularMDP& target,
                                 std::span<const StationaryPolicy> sources,
                                 const TransferParams& params, std::uint64_t seed) {
  if (params.t_episodes < 1) throw std::invalid_argument("exp3: T must be >= 1");
  if (params.elimination_interval < 1) throw std::invalid_argument("exp3: l must be >= 1");
  const int c = static_cast<int>(sources.size());
  const double beta = params.beta > 0.0 ? params.beta : exp3_auto_beta(c, params.t_episodes);
  Exp3State state = make_exp3_state(c, beta);

  QLearningActor learner(target.n_states, target.n_actions, target.gamma, params.qlearn);
  Rng arm_rng(derive_seed(seed, "exp3.arm"));

  LearningRecord record;
  record.rows.reserve(static_cast<std::size_t>(params.t_episodes));
  double cumulative = 0.0;

  for (long t = 1; t <= params.t_episodes; ++t) {
    const std::vector<double> p = arm_probabilities(state);
    int arm = state.learning_arm();
    if (c > 0) {
      const double u = arm_rng.next_double();
      double acc = 0.0;
      for (int i = 0; i <= c; ++i) {
        acc += p[static_cast<std::size_t>(i)];
        if (u < acc) {
          arm = i;
          break;
        }
      }
    }

    Rng episode_rng(derive_seed(seed, "episode", static_cast<std::uint64_t>(t)));
    EpisodeResult episode;
    if (arm == state.learning_arm()) {
      episode = run_episode(target, learner, params.horizon, episode_rng);
    } else {
      PolicyActor actor(sources[static_cast<std::size_t>(arm)]);
      episode = run_episode(target, actor, params.horizon, episode_rng);
    }

    const double x = normalize_return(episode.discounted_return, target.r_min, target.r_max,
                                      target.gamma, &record.clip_warnings);
    if (arm != state.learning_arm()) {
      ++state.pulls[static_cast<std::size_t>(arm)];
      state.z[static_cast<std::size_t>(arm)] += x;
    }
    exp3_update(state, arm, x);
    ++state.t;
    if (state.t % params.elimination_interval == 0) elimination_check(state, params.delta);

    cumulative += episode.discounted_return;
    EpisodeRow row;
    row.episode = t;
    row.arm = arm;
    row.raw_return = episode.discounted_return;
    row.normalized_return = x;
    row.active_arms = state.active_arms();
    row.cumulative = cumulative;
    record.rows.push_back(std::move(row));
  }
  return record;
}

std::string learning_record_csv(const LearningRecord& record) {
  std::string out =
      "episode,arm,raw_return,normalized_return,active_arms,cumulative_discounted_reward\n";
  for (const auto& row : record.rows) {
    out += std::to_string(row.episode) + "," + std::to_string(row.arm) + "," +
           fmt_double(row.raw_return) + "," + fmt_double(row.normalized_return) + ",";
    for (std::size_t i = 0; i < row.active_arms.size(); ++i) {
      if (i) out += ';';
      out += std::to_string(row.active_arms[i]);
    }
    out += "," + fmt_double(row.cumulative) + "\n";
  }
  return out;
}

LearningRecord parse_learning_record_csv(std::istream& in) {
  LearningRecord record;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("learning record: empty file");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    EpisodeRow row;
    std::getline(ss, field, ',');
    row.episode = std::stol(field);
    std::getline(ss, field, ',');
    row.arm = std::stoi(field);
    std::getline(ss, field, ',');
    row.raw_return = std::stod(field);
    std::getline(ss, field, ',');
    row.normalized_return = std::stod(field);
    std::getline(ss, field, ',');
    std::stringstream arms(field);
    std::string arm;
    while (std::getline(arms, arm, ';'))
      if (!arm.empty()) row.active_arms.push_back(std::stoi(arm));
    std::getline(ss, field, ',');
    row.cumulative = std::stod(field);
    record.rows.push_back(std::move(row));
  }
  return record;
}

LearningRecord load_learning_record_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("learning record: cannot open " + path);
  return parse_learning_record_csv(in);
}

void save_learning_record_csv(const std::string& path, const LearningRecord& record) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("learning record: cannot write " + path);
  out << learning_record_csv(record);
  if (!out) throw std::runtime_error("learning record: write failed for " + path);
}

}  // namespace mdpc
