#include "mdpc/solve.hpp"

#include <cmath>
#include <limits>

#include "mdpc/kernels.hpp"
#include "mdpc/linalg.hpp"

namespace mdpc {

namespace {

double q_value(const TabularMDP& mdp, const std::vector<double>& v, int s, int a) {
  const std::size_t idx = mdp.sa_index(s, a);
  double acc = 0.0;
  for (const auto& e : mdp.rows[idx]) acc += e.prob * v[static_cast<std::size_t>(e.state)];
  return mdp.reward[idx] + mdp.gamma * acc;
}

}  // namespace

ValueFunction bellman_backup(const TabularMDP& mdp, const ValueFunction& v) {
  ValueFunction out;
  out.v.resize(static_cast<std::size_t>(mdp.n_states));
  for (int s = 0; s < mdp.n_states; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < mdp.n_actions; ++a) best = std::max(best, q_value(mdp, v.v, s, a));
    out.v[static_cast<std::size_t>(s)] = best;
  }
  return out;
}

double bellman_residual(const TabularMDP& mdp, const ValueFunction& v) {
  const ValueFunction next = bellman_backup(mdp, v);
  return kernels::max_abs_diff(next.v, v.v);
}

StationaryPolicy greedy_policy(const TabularMDP& mdp, const ValueFunction& v) {
  StationaryPolicy pi;
  pi.action.resize(static_cast<std::size_t>(mdp.n_states));
  for (int s = 0; s < mdp.n_states; ++s) {
    int best_a = 0;
    double best = q_value(mdp, v.v, s, 0);
    for (int a = 1; a < mdp.n_actions; ++a) {
      const double q = q_value(mdp, v.v, s, a);
      if (q > best) {
        best = q;
        best_a = a;
      }
    }
    pi.action[static_cast<std::size_t>(s)] = best_a;
  }
  return pi;
}

SolveResult solve_optimal(const TabularMDP& mdp, double tol, int max_iterations) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_optimal: tol must be positive");
  // Sweep tolerance chosen so the greedy policy of the converged iterate is
  // optimal well within tol: ||V_k - V*|| <= gamma * change / (1 - gamma).
  const double sweep_tol =
      mdp.gamma > 0.0 ? tol * (1.0 - mdp.gamma) / (2.0 * mdp.gamma) : tol;

  ValueFunction v;
  v.v.assign(static_cast<std::size_t>(mdp.n_states), 0.0);
  double change = std::numeric_limits<double>::infinity();
  int iter = 0;
  while (iter < max_iterations) {
    ValueFunction next = bellman_backup(mdp, v);
    change = kernels::max_abs_diff(next.v, v.v);
    v = std::move(next);
    ++iter;
    if (change <= sweep_tol) break;
  }
  if (change > sweep_tol)
    throw SolverError("solve_optimal: no convergence within iteration cap", change);

  SolveResult result;
  result.policy = greedy_policy(mdp, v);
  result.values = evaluate_policy(mdp, result.policy);
  result.iterations = iter;
  result.residual = bellman_residual(mdp, result.values);
  if (result.residual >= tol)
    throw SolverError("solve_optimal: residual above tolerance after policy evaluation",
                      result.residual);
  return result;
}

ValueFunction evaluate_policy(const TabularMDP& mdp, const StationaryPolicy& pi) {
  if (pi.action.size() != static_cast<std::size_t>(mdp.n_states))
    throw std::invalid_argument("evaluate_policy: policy size mismatch");
  const int n = mdp.n_states;
  const std::size_t un = static_cast<std::size_t>(n);
  for (int s = 0; s < n; ++s) {
    const int a = pi.action[static_cast<std::size_t>(s)];
    if (a < 0 || a >= mdp.n_actions)
      throw std::invalid_argument("evaluate_policy: action out of range");
  }

  std::vector<double> a_mat(un * un, 0.0);
  std::vector<double> b(un, 0.0);
  for (int s = 0; s < n; ++s) {
    const int act = pi.action[static_cast<std::size_t>(s)];
    const std::size_t idx = mdp.sa_index(s, act);
    a_mat[un * s + s] = 1.0;
    for (const auto& e : mdp.rows[idx])
      a_mat[un * s + static_cast<std::size_t>(e.state)] -= mdp.gamma * e.prob;
    b[static_cast<std::size_t>(s)] = mdp.reward[idx];
  }
  std::vector<double> a_copy = a_mat;
  std::vector<double> rhs = b;
  linalg::lu_solve(a_mat, b, n);

  const double res = linalg::residual_inf(a_copy, b, rhs, n);
  if (!(res <= 1e-9))
    throw SolverError("evaluate_policy: linear solve residual above 1e-9", res);
  ValueFunction vf;
  vf.v = std::move(b);
  return vf;
}

SolvedTask solve_task(TabularMDP mdp, double tol) {
  SolveResult r = solve_optimal(mdp, tol);
  return SolvedTask{std::move(mdp), std::move(r.policy), std::move(r.values)};
}

}  // namespace mdpc
