#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "mdpc/mhav.hpp"

using namespace mdpc;

namespace {

// tiny enumerable search space for chain-level checks
struct ToyKernel {
  int n = 4;
  struct Proposal {
    int point;
    double log_forward;
    double log_reverse;
  };
  Proposal propose(const int& y, Rng& rng) const {
    int y2 = rng.next_int(n - 1);
    if (y2 >= y) ++y2;
    const double log_p = -std::log(static_cast<double>(n - 1));
    return {y2, log_p, log_p};
  }
  int sample_initial(Rng& rng) const { return rng.next_int(n); }
};

std::vector<std::vector<double>> uniform_offdiag_kernel(int n) {
  std::vector<std::vector<double>> phi(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) phi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1.0 / (n - 1);
  return phi;
}

}  // namespace

TEST_CASE("target log density basic identities") {
  CHECK(target_log_density(3.7, 0.0) == 0.0);
  CHECK(target_log_density(1.0, 123.0) == 0.0);
  // ratio check against direct exponentiation
  const double lambda = 2.0, fy = 3.0, fy2 = 1.0;
  const double log_ratio = target_log_density(lambda, fy2) - target_log_density(lambda, fy);
  CHECK(std::exp(log_ratio) == doctest::Approx(std::pow(lambda, fy - fy2)));
  CHECK_THROWS_AS(target_log_density(0.0, 1.0), std::invalid_argument);
  // no overflow in log space at the extremes the search uses
  CHECK(std::isfinite(target_log_density(1e3, 1e6)));
}

TEST_CASE("ladder walk boundary and interior behaviour") {
  LambdaLadder one;
  one.values = {2.0};
  one.alpha_prime = 0.5;
  Rng rng(1);
  const LambdaMove stay = phi_lambda_step(0, one, rng);
  CHECK(stay.new_index == 0);
  CHECK(stay.forward_prob == 1.0);
  CHECK(stay.reverse_prob == 1.0);

  const LambdaLadder ladder = LambdaLadder::geometric(1.05, 1.5, 5, 0.5);
  // bottom boundary: always moves up with probability 1
  for (int i = 0; i < 10; ++i) {
    const LambdaMove up = phi_lambda_step(0, ladder, rng);
    CHECK(up.new_index == 1);
    CHECK(up.forward_prob == 1.0);
    CHECK(up.reverse_prob == doctest::Approx(0.5));  // reverse is an interior down-move
  }
  // top boundary mirrors
  const LambdaMove down = phi_lambda_step(4, ladder, rng);
  CHECK(down.new_index == 3);
  CHECK(down.forward_prob == 1.0);

  // interior moves split roughly alpha_prime / 1 - alpha_prime
  int ups = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i)
    if (phi_lambda_step(2, ladder, rng).new_index == 3) ++ups;
  CHECK(std::fabs(ups - trials * 0.5) < 3.0 * std::sqrt(trials * 0.25));
}

TEST_CASE("a lower-cost proposal under a symmetric kernel is accepted surely") {
  const double log_acc = mh_log_acceptance(std::log(0.5), std::log(0.5), 2.0, 3.0, 2.0, 1.0);
  CHECK(log_acc >= 0.0);
  CHECK(std::exp(std::min(0.0, log_acc)) == doctest::Approx(1.0));
}

TEST_CASE("lambda-up acceptance carries the (lambda'/lambda)^-f (1-a')/a' factor") {
  const LambdaLadder ladder = LambdaLadder::geometric(1.2, 2.0, 6, 0.3);
  const double f = 2.5;
  const int i = 2;
  // interior up-move: forward alpha', reverse 1 - alpha'
  const double log_acc =
      mh_log_acceptance(std::log(0.3), std::log(1.0 - 0.3), ladder.values[static_cast<std::size_t>(i)], f,
                        ladder.values[static_cast<std::size_t>(i) + 1], f);
  const double expected =
      std::pow(ladder.values[static_cast<std::size_t>(i) + 1] / ladder.values[static_cast<std::size_t>(i)], -f) *
      (1.0 - 0.3) / 0.3;
  CHECK(std::exp(log_acc) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("run_mhav on a constant cost returns that constant") {
  ToyKernel kernel;
  MhavParams params;
  params.alpha = 0.1;
  params.beta = 0.8;
  params.iterations = 200;
  params.restarts = 2;
  const auto result = run_mhav<int>([](const int&) { return 4.2; }, kernel,
                                    LambdaLadder::geometric(1.05, 1.5, 5), params, 7);
  CHECK(result.best_cost == doctest::Approx(4.2));
}

TEST_CASE("stay branch fires at least 1 - alpha - beta of the time") {
  ToyKernel kernel;
  MhavParams params;
  params.alpha = 0.1;
  params.beta = 0.8;
  params.iterations = 20000;
  params.restarts = 1;
  const auto result = run_mhav<int>([](const int& y) { return static_cast<double>(y); }, kernel,
                                    LambdaLadder::geometric(), params, 3);
  const double stay_rate = static_cast<double>(result.stay_steps) / 20000.0;
  CHECK(stay_rate > 0.1 - 3.0 * std::sqrt(0.1 * 0.9 / 20000.0));
}

TEST_CASE("best_seen never increases along a chain") {
  ToyKernel kernel;
  MhavParams params;
  params.alpha = 0.1;
  params.beta = 0.8;
  params.iterations = 5000;
  params.restarts = 1;
  double last_best = 1e18;
  bool monotone = true;
  run_mhav<int>([](const int& y) { return static_cast<double>(y % 3); }, kernel,
                LambdaLadder::geometric(), params, 11, [&](const TraceRow& row) {
                  if (row.best_so_far > last_best + 1e-15) monotone = false;
                  last_best = row.best_so_far;
                });
  CHECK(monotone);
}

TEST_CASE("chain matrix: stochastic, balanced, and converging at the proven rate") {
  const LambdaLadder ladder = LambdaLadder::geometric(1.3, 2.0, 3, 0.5);
  const std::vector<double> costs = {0.0, 1.0, 2.0, 1.5};
  MhavParams params;
  params.alpha = 0.15;
  params.beta = 0.6;
  const ChainMatrix m = build_chain_matrix(ladder, costs, uniform_offdiag_kernel(4), params);
  CHECK(m.n() == 12);
  CHECK(row_sum_gap(m) < 1e-12);
  CHECK(detailed_balance_gap(m) < 1e-12);

  const int diameter = chain_diameter(m);
  const double delta = chain_delta(m, diameter);
  CHECK(delta > 0.0);
  CHECK(delta <= 1.0);
  for (const long mult : {1L, 5L, 20L}) {
    const long n = mult * diameter;
    const double tv = chain_tv_from(m, 0, n);
    const double bound = std::pow(1.0 - delta, static_cast<double>(n) / diameter);
    CHECK(tv <= bound + 1e-12);
  }

  // Stationarity consequence: once TV <= k, the mass on the minimal-cost set
  // stays above theta - k (theta = target mass of that set).
  double theta = 0.0;
  for (int li = 0; li < m.n_lambda; ++li) theta += m.pi[static_cast<std::size_t>(m.index(li, 0))];
  const long n = 5L * diameter;
  const double k = chain_tv_from(m, 3, n);
  const auto row = matrix_power_row(m, 3, n);
  double mass = 0.0;
  for (int li = 0; li < m.n_lambda; ++li) mass += row[static_cast<std::size_t>(m.index(li, 0))];
  CHECK(mass >= theta - k - 1e-12);
}

TEST_CASE("two-point space diagnostics are hand-checkable") {
  LambdaLadder ladder;
  ladder.values = {2.0};
  ladder.alpha_prime = 0.5;
  const std::vector<double> costs = {0.0, 1.0};
  MhavParams params;
  params.alpha = 0.1;
  params.beta = 0.5;
  const ChainMatrix m = build_chain_matrix(ladder, costs, uniform_offdiag_kernel(2), params);
  // from y=0: propose y=1 w.p. beta, accept with 2^-1; from y=1 accept fully
  CHECK(m.at(0, 1) == doctest::Approx(0.5 * 0.5));
  CHECK(m.at(1, 0) == doctest::Approx(0.5));
  CHECK(m.at(0, 0) == doctest::Approx(0.75));
  CHECK(chain_diameter(m) == 1);
  const double delta = chain_delta(m, 1);
  // pi = (2/3, 1/3); delta = min(P(x,x')/pi(x')) = min over the four entries
  CHECK(delta == doctest::Approx(std::min({0.25 / (1.0 / 3.0), 0.5 / (2.0 / 3.0),
                                           0.75 / (2.0 / 3.0), 0.5 / (1.0 / 3.0)})));
}

TEST_CASE("realized chain frequencies match the explicit matrix rows") {
  const LambdaLadder ladder = LambdaLadder::geometric(1.3, 2.0, 2, 0.5);
  const std::vector<double> costs = {0.0, 1.0, 0.5};
  MhavParams params;
  params.alpha = 0.2;
  params.beta = 0.6;
  const ChainMatrix m = build_chain_matrix(ladder, costs, uniform_offdiag_kernel(3), params);

  // drive the same dynamics with the sampling chain
  struct MatrixKernel {
    int n;
    struct Proposal {
      int point;
      double log_forward;
      double log_reverse;
    };
    Proposal propose(const int& y, Rng& rng) const {
      int y2 = rng.next_int(n - 1);
      if (y2 >= y) ++y2;
      const double lp = -std::log(static_cast<double>(n - 1));
      return {y2, lp, lp};
    }
    int sample_initial(Rng& rng) const { return rng.next_int(n); }
  };
  Rng rng(2024);
  MhavChain<int, MatrixKernel, double (*)(const int&)> chain(
      [](const int& y) { return std::vector<double>{0.0, 1.0, 0.5}[static_cast<std::size_t>(y)]; },
      MatrixKernel{3}, ladder, params, 0, &rng);

  std::map<std::pair<int, int>, long> counts;
  std::map<int, long> visits;
  std::vector<double> occupancy(static_cast<std::size_t>(m.n()), 0.0);
  int prev = chain.state().lambda_index * 3 + chain.state().point;
  const long steps = 100000;
  const long burn_in = 10000;
  for (long t = 0; t < steps; ++t) {
    chain.step();
    const int cur = chain.state().lambda_index * 3 + chain.state().point;
    ++counts[{prev, cur}];
    ++visits[prev];
    if (t >= burn_in) occupancy[static_cast<std::size_t>(cur)] += 1.0;
    prev = cur;
  }
  // long-run occupancy matches the exact target distribution
  for (double& o : occupancy) o /= static_cast<double>(steps - burn_in);
  double occupancy_tv = 0.0;
  for (int i = 0; i < m.n(); ++i)
    occupancy_tv += std::fabs(occupancy[static_cast<std::size_t>(i)] - m.pi[static_cast<std::size_t>(i)]);
  CHECK(occupancy_tv / 2.0 <= 0.05);
  // chi-square sanity on the most-visited row
  int row = 0;
  long best = 0;
  for (const auto& [state, n] : visits)
    if (n > best) {
      best = n;
      row = state;
    }
  double chi_sq = 0.0;
  int dof = 0;
  for (int to = 0; to < m.n(); ++to) {
    const double expected = static_cast<double>(best) * m.at(row, to);
    if (expected < 5.0) continue;
    const double observed = static_cast<double>(counts[{row, to}]);
    chi_sq += (observed - expected) * (observed - expected) / expected;
    ++dof;
  }
  CHECK(dof >= 2);
  // generous 99.9%-style envelope
  CHECK(chi_sq < dof + 5.0 * std::sqrt(2.0 * dof) + 10.0);
}

TEST_CASE("kernel reporting a zero density is a hard error") {
  struct BadKernel {
    struct Proposal {
      int point;
      double log_forward;
      double log_reverse;
    };
    Proposal propose(const int&, Rng&) const {
      return {1, -std::numeric_limits<double>::infinity(), 0.0};
    }
    int sample_initial(Rng&) const { return 0; }
  };
  Rng rng(3);
  MhavParams params;
  params.alpha = 0.05;
  params.beta = 0.9;
  MhavChain<int, BadKernel, double (*)(const int&)> chain(
      [](const int&) { return 1.0; }, BadKernel{}, LambdaLadder::geometric(), params, 0, &rng);
  bool threw = false;
  for (int i = 0; i < 200 && !threw; ++i) {
    try {
      chain.step();
    } catch (const std::runtime_error&) {
      threw = true;
    }
  }
  CHECK(threw);
}
