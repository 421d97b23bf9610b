#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "mdpc/rng.hpp"

namespace mdpc {

// Auxiliary-variable ladder: strictly increasing positive values plus the
// up-move probability of the ladder walk.
struct LambdaLadder {
  std::vector<double> values;
  double alpha_prime = 0.5;

  static LambdaLadder geometric(double base = 1.05, double ratio = 1.5, int n = 20,
                                double alpha_prime = 0.5);
  void validate() const;
  int size() const { return static_cast<int>(values.size()); }
};

// log of the unnormalized target: -cost * ln(lambda).
inline double target_log_density(double lambda, double cost) {
  if (!(lambda > 0.0)) throw std::invalid_argument("target_log_density: lambda must be > 0");
  return -cost * std::log(lambda);
}

struct LambdaMove {
  int new_index;
  double forward_prob;
  double reverse_prob;
};

// One ladder-walk proposal: interior indices move up w.p. alpha_prime, down
// otherwise; boundary indices move inward w.p. 1. Returns both transition
// probabilities for the acceptance ratio.
LambdaMove phi_lambda_step(int index, const LambdaLadder& ladder, Rng& rng);

struct MhavParams {
  double alpha = 0.1;  // probability of a lambda move
  double beta = 0.8;   // probability of a point move
  long iterations = 100000;
  int restarts = 20;
};

// log acceptance ratio of a Metropolis-Hastings move, assembled from the
// proposal log-densities and the target at both endpoints.
inline double mh_log_acceptance(double log_forward, double log_reverse, double lambda_from,
                                double cost_from, double lambda_to, double cost_to) {
  return (log_reverse - log_forward) + target_log_density(lambda_to, cost_to) -
         target_log_density(lambda_from, cost_from);
}

// One chain over (ladder index, point). The Kernel supplies point proposals:
//   struct Proposal { Point point; double log_forward; double log_reverse; };
//   Proposal propose(const Point&, Rng&);
// Both densities must be finite (positive); anything else is a hard error.
template <typename Point, typename Kernel, typename CostFn>
class MhavChain {
 public:
  struct State {
    int lambda_index = 0;
    Point point;
    double cost = 0.0;
    Point best_point;
    double best_cost = 0.0;
  };

  struct StepInfo {
    bool proposed_lambda = false;
    bool proposed_point = false;
    bool accepted = false;
  };

  MhavChain(CostFn cost_fn, Kernel kernel, const LambdaLadder& ladder, const MhavParams& params,
            Point init, Rng* rng)
      : cost_fn_(std::move(cost_fn)),
        kernel_(std::move(kernel)),
        ladder_(&ladder),
        params_(params),
        rng_(rng) {
    ladder.validate();
    if (!(params.alpha > 0.0 && params.beta > 0.0 && params.alpha + params.beta < 1.0))
      throw std::invalid_argument("mhav: need alpha, beta in (0,1) with alpha + beta < 1");
    state_.point = std::move(init);
    state_.cost = cost_fn_(state_.point);
    state_.best_point = state_.point;
    state_.best_cost = state_.cost;
  }

  StepInfo step() {
    StepInfo info;
    const double u = rng_->next_double();
    if (u < params_.alpha) {
      info.proposed_lambda = true;
      const LambdaMove move = phi_lambda_step(state_.lambda_index, *ladder_, *rng_);
      if (move.new_index != state_.lambda_index) {
        const double log_acc = mh_log_acceptance(
            std::log(move.forward_prob), std::log(move.reverse_prob),
            lambda(), state_.cost, ladder_->values[static_cast<std::size_t>(move.new_index)],
            state_.cost);
        if (accept(log_acc)) {
          state_.lambda_index = move.new_index;
          info.accepted = true;
        }
      }
    } else if (u < params_.alpha + params_.beta) {
      info.proposed_point = true;
      auto proposal = kernel_.propose(state_.point, *rng_);
      if (!std::isfinite(proposal.log_forward) || !std::isfinite(proposal.log_reverse))
        throw std::runtime_error("mhav: kernel reported a non-positive proposal density");
      const double proposed_cost = cost_fn_(proposal.point);
      const double log_acc = mh_log_acceptance(proposal.log_forward, proposal.log_reverse,
                                               lambda(), state_.cost, lambda(), proposed_cost);
      if (accept(log_acc)) {
        state_.point = std::move(proposal.point);
        state_.cost = proposed_cost;
        info.accepted = true;
        if (state_.cost < state_.best_cost) {
          state_.best_cost = state_.cost;
          state_.best_point = state_.point;
        }
      }
    }
    return info;
  }

  double lambda() const { return ladder_->values[static_cast<std::size_t>(state_.lambda_index)]; }
  const State& state() const { return state_; }

 private:
  bool accept(double log_acc) {
    if (log_acc >= 0.0) return true;
    return rng_->next_double() < std::exp(log_acc);
  }

  CostFn cost_fn_;
  Kernel kernel_;
  const LambdaLadder* ladder_;
  MhavParams params_;
  Rng* rng_;
  State state_;
};

struct TraceRow {
  long iteration;
  int restart;
  double lambda;
  double cost;
  bool accepted;
  double best_so_far;
};

using TraceSink = std::function<void(const TraceRow&)>;

template <typename Point>
struct MhavResult {
  Point best;
  double best_cost = 0.0;
  long stay_steps = 0;  // iterations with no proposal at all
};

// Best-of-restarts optimization. Each restart draws a fresh initial point
// from the kernel and resets the ladder to its first rung. Deterministic
// given the seed.
template <typename Point, typename Kernel, typename CostFn>
MhavResult<Point> run_mhav(CostFn cost_fn, Kernel kernel, const LambdaLadder& ladder,
                           const MhavParams& params, std::uint64_t seed,
                           const TraceSink& trace = nullptr) {
  if (params.iterations < 1) throw std::invalid_argument("mhav: iterations must be >= 1");
  if (params.restarts < 1) throw std::invalid_argument("mhav: restarts must be >= 1");
  bool have_best = false;
  MhavResult<Point> result;
  for (int restart = 0; restart < params.restarts; ++restart) {
    Rng rng(derive_seed(seed, "mhav.restart", static_cast<std::uint64_t>(restart)));
    Point init = kernel.sample_initial(rng);
    MhavChain<Point, Kernel, CostFn> chain(cost_fn, kernel, ladder, params, std::move(init), &rng);
    if (trace)
      trace({0, restart, chain.lambda(), chain.state().cost, false, chain.state().best_cost});
    for (long t = 1; t <= params.iterations; ++t) {
      const auto info = chain.step();
      if (!info.proposed_lambda && !info.proposed_point) ++result.stay_steps;
      if (trace)
        trace({t, restart, chain.lambda(), chain.state().cost, info.accepted,
               chain.state().best_cost});
    }
    if (!have_best || chain.state().best_cost < result.best_cost) {
      result.best = chain.state().best_point;
      result.best_cost = chain.state().best_cost;
      have_best = true;
    }
  }
  return result;
}

// --- Diagnostics on an enumerable space -----------------------------------
//
// Explicit chain matrix over (ladder index, point) pairs, for checking
// detailed balance, stochasticity, and the (1-delta)^(n/D) TV bound.

struct ChainMatrix {
  int n_lambda = 0;
  int n_points = 0;
  std::vector<double> p;   // row-major (n_lambda*n_points)^2
  std::vector<double> pi;  // exact target, same indexing

  int n() const { return n_lambda * n_points; }
  int index(int lambda_idx, int point) const { return lambda_idx * n_points + point; }
  double at(int from, int to) const {
    return p[static_cast<std::size_t>(from) * static_cast<std::size_t>(n()) + static_cast<std::size_t>(to)];
  }
};

// phi_point is a full proposal matrix over points (rows sum to 1, self moves
// allowed); costs holds f(y). Refuses spaces above 1000 chain states.
ChainMatrix build_chain_matrix(const LambdaLadder& ladder, const std::vector<double>& costs,
                               const std::vector<std::vector<double>>& phi_point,
                               const MhavParams& params);

// Smallest l with all entries of P^l positive. Throws if none <= max_power.
int chain_diameter(const ChainMatrix& m, int max_power = 64);

// min over (x,x') of P^D(x,x') / pi(x').
double chain_delta(const ChainMatrix& m, int diameter);

// Total-variation distance between row `start` of P^steps and pi.
double chain_tv_from(const ChainMatrix& m, int start, long steps);

// max |pi(x)P(x,y) - pi(y)P(y,x)| over all pairs.
double detailed_balance_gap(const ChainMatrix& m);

// max |row sum - 1|.
double row_sum_gap(const ChainMatrix& m);

std::vector<double> matrix_power_row(const ChainMatrix& m, int start, long steps);

}  // namespace mdpc
