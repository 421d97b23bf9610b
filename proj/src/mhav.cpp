#include "mdpc/mhav.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mdpc/kernels.hpp"

namespace mdpc {

LambdaLadder LambdaLadder::geometric(double base, double ratio, int n, double alpha_prime) {
  LambdaLadder ladder;
  ladder.alpha_prime = alpha_prime;
  ladder.values.reserve(static_cast<std::size_t>(n));
  double v = base;
  for (int i = 0; i < n; ++i) {
    ladder.values.push_back(v);
    v *= ratio;
  }
  ladder.validate();
  return ladder;
}

void LambdaLadder::validate() const {
  if (values.empty()) throw std::invalid_argument("ladder: needs at least one value");
  if (!(alpha_prime > 0.0 && alpha_prime < 1.0))
    throw std::invalid_argument("ladder: alpha_prime must lie in (0,1)");
  double prev = 0.0;
  for (double v : values) {
    if (!(v > prev)) throw std::invalid_argument("ladder: values must be positive and strictly increasing");
    prev = v;
  }
}

LambdaMove phi_lambda_step(int index, const LambdaLadder& ladder, Rng& rng) {
  const int n = ladder.size();
  const double up = ladder.alpha_prime;
  if (n == 1) return {index, 1.0, 1.0};

  // probability of the move index -> index+1 (or -> index-1) under phi_Lambda
  auto up_prob = [&](int from) { return from == 0 ? 1.0 : up; };
  auto down_prob = [&](int from) { return from == n - 1 ? 1.0 : 1.0 - up; };

  bool go_up;
  if (index == 0)
    go_up = true;
  else if (index == n - 1)
    go_up = false;
  else
    go_up = rng.next_double() < up;

  if (go_up) {
    const int to = index + 1;
    return {to, up_prob(index), down_prob(to)};
  }
  const int to = index - 1;
  return {to, down_prob(index), up_prob(to)};
}

ChainMatrix build_chain_matrix(const LambdaLadder& ladder, const std::vector<double>& costs,
                               const std::vector<std::vector<double>>& phi_point,
                               const MhavParams& params) {
  ladder.validate();
  const int n_points = static_cast<int>(costs.size());
  const int n_lambda = ladder.size();
  const int n = n_lambda * n_points;
  if (n > 1000) throw std::invalid_argument("diagnostics: space too large to enumerate");
  if (static_cast<int>(phi_point.size()) != n_points)
    throw std::invalid_argument("diagnostics: kernel matrix size mismatch");
  for (const auto& row : phi_point) {
    if (static_cast<int>(row.size()) != n_points)
      throw std::invalid_argument("diagnostics: kernel matrix not square");
    double sum = 0.0;
    for (double v : row) sum += v;
    if (std::fabs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("diagnostics: kernel rows must sum to 1");
  }
  if (!(params.alpha > 0.0 && params.beta > 0.0 && params.alpha + params.beta < 1.0))
    throw std::invalid_argument("diagnostics: need alpha, beta in (0,1), alpha + beta < 1");

  ChainMatrix m;
  m.n_lambda = n_lambda;
  m.n_points = n_points;
  m.p.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  m.pi.assign(static_cast<std::size_t>(n), 0.0);

  double z = 0.0;
  for (int li = 0; li < n_lambda; ++li)
    for (int y = 0; y < n_points; ++y) {
      const double w = std::pow(ladder.values[static_cast<std::size_t>(li)],
                                -costs[static_cast<std::size_t>(y)]);
      m.pi[static_cast<std::size_t>(m.index(li, y))] = w;
      z += w;
    }
  for (double& v : m.pi) v /= z;

  const double up = ladder.alpha_prime;
  auto lambda_fwd = [&](int from, int to) {
    if (n_lambda == 1) return 0.0;
    if (to == from + 1) return from == 0 ? 1.0 : up;
    if (to == from - 1) return from == n_lambda - 1 ? 1.0 : 1.0 - up;
    return 0.0;
  };

  for (int li = 0; li < n_lambda; ++li) {
    for (int y = 0; y < n_points; ++y) {
      const int x = m.index(li, y);
      double off_mass = 0.0;
      // lambda moves, point fixed
      for (const int lj : {li - 1, li + 1}) {
        if (lj < 0 || lj >= n_lambda) continue;
        const double fwd = lambda_fwd(li, lj);
        if (fwd <= 0.0) continue;
        const double rev = lambda_fwd(lj, li);
        const double log_acc =
            mh_log_acceptance(std::log(fwd), std::log(rev), ladder.values[static_cast<std::size_t>(li)],
                              costs[static_cast<std::size_t>(y)],
                              ladder.values[static_cast<std::size_t>(lj)],
                              costs[static_cast<std::size_t>(y)]);
        const double acc = std::min(1.0, std::exp(log_acc));
        const double mass = params.alpha * fwd * acc;
        m.p[static_cast<std::size_t>(x) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(m.index(lj, y))] += mass;
        off_mass += mass;
      }
      // point moves, lambda fixed
      for (int y2 = 0; y2 < n_points; ++y2) {
        if (y2 == y) continue;
        const double fwd = phi_point[static_cast<std::size_t>(y)][static_cast<std::size_t>(y2)];
        if (fwd <= 0.0) continue;
        const double rev = phi_point[static_cast<std::size_t>(y2)][static_cast<std::size_t>(y)];
        if (rev <= 0.0) throw std::invalid_argument("diagnostics: kernel must be reversible-positive");
        const double log_acc = mh_log_acceptance(
            std::log(fwd), std::log(rev), ladder.values[static_cast<std::size_t>(li)],
            costs[static_cast<std::size_t>(y)], ladder.values[static_cast<std::size_t>(li)],
            costs[static_cast<std::size_t>(y2)]);
        const double acc = std::min(1.0, std::exp(log_acc));
        const double mass = params.beta * fwd * acc;
        m.p[static_cast<std::size_t>(x) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(m.index(li, y2))] += mass;
        off_mass += mass;
      }
      m.p[static_cast<std::size_t>(x) * static_cast<std::size_t>(n) + static_cast<std::size_t>(x)] =
          1.0 - off_mass;
    }
  }
  return m;
}

namespace {

std::vector<double> matrix_multiply(const std::vector<double>& a, const std::vector<double>& b, int n) {
  const std::size_t un = static_cast<std::size_t>(n);
  std::vector<double> out(un * un, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double v = a[un * i + k];
      if (v == 0.0) continue;
      kernels::axpy(v, {&b[un * k], un}, {&out[un * i], un});
    }
  return out;
}

}  // namespace

int chain_diameter(const ChainMatrix& m, int max_power) {
  const int n = m.n();
  std::vector<double> power = m.p;
  for (int l = 1; l <= max_power; ++l) {
    bool all_positive = true;
    for (double v : power)
      if (!(v > 0.0)) {
        all_positive = false;
        break;
      }
    if (all_positive) return l;
    power = matrix_multiply(power, m.p, n);
  }
  throw std::runtime_error("diagnostics: no all-positive power within cap");
}

double chain_delta(const ChainMatrix& m, int diameter) {
  const int n = m.n();
  std::vector<double> power = m.p;
  for (int l = 1; l < diameter; ++l) power = matrix_multiply(power, m.p, n);
  double delta = std::numeric_limits<double>::infinity();
  const std::size_t un = static_cast<std::size_t>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      delta = std::min(delta, power[un * i + j] / m.pi[static_cast<std::size_t>(j)]);
  return delta;
}

std::vector<double> matrix_power_row(const ChainMatrix& m, int start, long steps) {
  const int n = m.n();
  const std::size_t un = static_cast<std::size_t>(n);
  std::vector<double> row(un, 0.0);
  row[static_cast<std::size_t>(start)] = 1.0;
  for (long t = 0; t < steps; ++t) {
    std::vector<double> next(un, 0.0);
    for (int i = 0; i < n; ++i) {
      const double v = row[static_cast<std::size_t>(i)];
      if (v == 0.0) continue;
      kernels::axpy(v, {&m.p[un * static_cast<std::size_t>(i)], un}, next);
    }
    row = std::move(next);
  }
  return row;
}

double chain_tv_from(const ChainMatrix& m, int start, long steps) {
  const std::vector<double> row = matrix_power_row(m, start, steps);
  return 0.5 * kernels::l1_diff(row, m.pi);
}

double detailed_balance_gap(const ChainMatrix& m) {
  const int n = m.n();
  double gap = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double lhs = m.pi[static_cast<std::size_t>(i)] * m.at(i, j);
      const double rhs = m.pi[static_cast<std::size_t>(j)] * m.at(j, i);
      gap = std::max(gap, std::fabs(lhs - rhs));
    }
  return gap;
}

double row_sum_gap(const ChainMatrix& m) {
  const int n = m.n();
  double gap = 0.0;
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += m.at(i, j);
    gap = std::max(gap, std::fabs(sum - 1.0));
  }
  return gap;
}

}  // namespace mdpc
