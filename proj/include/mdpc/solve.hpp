#pragma once

#include <stdexcept>

#include "mdpc/mdp.hpp"

namespace mdpc {

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct SolveResult {
  StationaryPolicy policy;
  ValueFunction values;  // exact value of `policy` (linear solve)
  int iterations = 0;
  double residual = 0.0;  // final optimal-Bellman residual of `values`
};

// Optimal policy and value function. Value iteration finds the greedy policy
// (ties broken toward the lowest action index), then the policy is evaluated
// exactly; the returned values satisfy the optimal Bellman equation within
// tol. Throws SolverError if the iteration cap is hit, carrying the residual.
SolveResult solve_optimal(const TabularMDP& mdp, double tol = 1e-9, int max_iterations = 200000);

// Exact policy evaluation, (I - gamma P_pi) V = R_pi via dense LU.
// The solution is verified to 1e-9 residual.
ValueFunction evaluate_policy(const TabularMDP& mdp, const StationaryPolicy& pi);

// One optimal Bellman backup of v; returns the updated values.
ValueFunction bellman_backup(const TabularMDP& mdp, const ValueFunction& v);

// max_s |v(s) - max_a [R(s,a) + gamma sum P v]|
double bellman_residual(const TabularMDP& mdp, const ValueFunction& v);

// Greedy policy w.r.t. v, lexicographic tie-break.
StationaryPolicy greedy_policy(const TabularMDP& mdp, const ValueFunction& v);

// An MDP bundled with its canonical optimal policy and exact values.
struct SolvedTask {
  TabularMDP mdp;
  StationaryPolicy policy;
  ValueFunction values;

  double v_star_initial() const { return values.v[static_cast<std::size_t>(mdp.initial_state)]; }
};

SolvedTask solve_task(TabularMDP mdp, double tol = 1e-9);

}  // namespace mdpc
