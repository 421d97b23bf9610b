#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mdpc/clustering.hpp"
#include "mdpc/rng.hpp"

using namespace mdpc;

namespace {

DistanceMatrix matrix_from(const std::vector<std::vector<double>>& rows, DistanceKind kind) {
  DistanceMatrix m;
  m.kind = kind;
  m.n = static_cast<int>(rows.size());
  m.values.resize(static_cast<std::size_t>(m.n) * static_cast<std::size_t>(m.n));
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) m.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

DistanceMatrix random_matrix(int n, Rng& rng, DistanceKind kind = DistanceKind::dv) {
  DistanceMatrix m;
  m.kind = kind;
  m.n = n;
  m.values.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = rng.uniform(0.0, 5.0);
      m.at(i, j) = d;
      m.at(j, i) = d;
    }
  return m;
}

Clustering random_clustering(int n, Rng& rng) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (auto& l : labels) l = rng.next_int(n);
  return Clustering::from_assignment(labels);
}

}  // namespace

TEST_CASE("clustering canonicalizes labels and keeps the partition valid") {
  const Clustering a = Clustering::from_assignment({7, 3, 7, 3, 9});
  CHECK(a.cluster_count() == 3);
  CHECK(a.clusters()[0] == std::vector<int>{0, 2});
  CHECK(a.clusters()[1] == std::vector<int>{1, 3});
  CHECK(a.clusters()[2] == std::vector<int>{4});
  CHECK(a.assignment() == std::vector<int>{0, 1, 0, 1, 2});
  // relabelings collapse to the same canonical form
  CHECK(a == Clustering::from_assignment({0, 1, 0, 1, 2}));
  CHECK(a == Clustering::from_assignment({2, 0, 2, 0, 1}));
}

TEST_CASE("centroid minimizes the maximum distance, ties to the lowest index") {
  const auto m = matrix_from({{0, 1, 1}, {1, 0, 3}, {1, 3, 0}}, DistanceKind::dv);
  CHECK(centroid({0, 1, 2}, m) == 0);
  CHECK(centroid({1}, m) == 1);
  const auto zeros = matrix_from({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}, DistanceKind::dv);
  CHECK(centroid({0, 1, 2}, zeros) == 0);
  CHECK(centroid({1, 2}, zeros) == 1);
  CHECK_THROWS_AS(centroid({}, m), std::invalid_argument);
}

TEST_CASE("g_of_c matches direct evaluation, scaling, and monotonicity") {
  // g(1), DeltaR=1, gamma=0.9, T=10^4: 26.3 sqrt(2 ln 2 / 1e4)
  const double expect = 1.0 / 0.1 * 2.63 * std::sqrt(2.0 * std::log(2.0) / 1e4);
  CHECK(g_of_c(1, 1.0, 0.9, 10000) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect == doctest::Approx(0.30967).epsilon(1e-4));
  CHECK(g_of_c(3, 1.0, 0.9, 10000) / g_of_c(3, 1.0, 0.9, 40000) == doctest::Approx(2.0));
  for (int c = 1; c < 100; ++c)
    CHECK(g_of_c(c + 1, 2.0, 0.9, 5000) > g_of_c(c, 2.0, 0.9, 5000));
}

TEST_CASE("cost1 on degenerate and hand-computed clusterings") {
  CostParams p;
  p.delta_r = 1.0;
  p.r_max = 1.0;
  p.gamma = 0.9;
  p.t_horizon = 10000;

  Rng rng(15);
  const auto m = random_matrix(5, rng, DistanceKind::dm);
  CHECK(cost1(Clustering::singletons(5), m, p) ==
        doctest::Approx(g_of_c(5, p.delta_r, p.gamma, p.t_horizon)));

  DistanceMatrix zeros = m;
  std::fill(zeros.values.begin(), zeros.values.end(), 0.0);
  CHECK(cost1(Clustering::one_cluster(5), zeros, p) ==
        doctest::Approx(g_of_c(1, p.delta_r, p.gamma, p.t_horizon)));

  // two far groups of 3: diameters read off the explicit matrix
  const auto two_groups = matrix_from(
      {
          {0, 1, 2, 9, 9, 9},
          {1, 0, 1, 9, 9, 9},
          {2, 1, 0, 9, 9, 9},
          {9, 9, 9, 0, 3, 4},
          {9, 9, 9, 3, 0, 3},
          {9, 9, 9, 4, 3, 0},
      },
      DistanceKind::dm);
  const Clustering split = Clustering::from_assignment({0, 0, 0, 1, 1, 1});
  // centroid of {0,1,2} is task 1 (max 1), of {3,4,5} is task 4 (max 3)
  const double expected = g_of_c(2, p.delta_r, p.gamma, p.t_horizon) + k_m(3.0, p.gamma, p.r_max);
  CHECK(cost1(split, two_groups, p) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("cost2 and cost2m degenerate cases and the two-member formula") {
  CostParams p;
  p.delta_r = 1.0;
  p.r_max = 1.0;
  p.gamma = 0.9;
  p.t_horizon = 10000;
  Rng rng(25);
  const auto m = random_matrix(6, rng);

  CHECK(cost2(Clustering::singletons(6), m, p) == doctest::Approx(g_of_c(6, 1.0, 0.9, 10000)));
  CHECK(cost2m(Clustering::singletons(6), m, p) == doctest::Approx(g_of_c(6, 1.0, 0.9, 10000)));

  DistanceMatrix zeros = m;
  std::fill(zeros.values.begin(), zeros.values.end(), 0.0);
  CHECK(cost2(Clustering::one_cluster(6), zeros, p) == doctest::Approx(g_of_c(1, 1.0, 0.9, 10000)));

  // pair cluster {0,1}: eps_bar_m picks up (2/N) d(0,1)
  const Clustering pair = Clustering::from_assignment({0, 0, 1, 2, 3, 4});
  const double base = g_of_c(5, 1.0, 0.9, 10000);
  CHECK(cost2m(pair, m, p) == doctest::Approx(base + 2.0 / 6.0 * m.at(0, 1)).epsilon(1e-12));
  CHECK(cost2(pair, m, p) == doctest::Approx(base + 2.0 / 6.0 * m.at(0, 1)).epsilon(1e-12));
}

TEST_CASE("cost2m upper-bounds cost2 on random clusterings") {
  Rng rng(35);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + rng.next_int(8);
    const auto m = random_matrix(n, rng);
    const Clustering a = random_clustering(n, rng);
    CostParams p;
    p.t_horizon = 5000;
    CHECK(cost2m(a, m, p) >= cost2(a, m, p) - 1e-12);
  }
}

TEST_CASE("costs are invariant to relabeling") {
  Rng rng(45);
  const auto m = random_matrix(7, rng);
  CostParams p;
  const Clustering a = Clustering::from_assignment({0, 1, 1, 2, 0, 2, 1});
  const Clustering b = Clustering::from_assignment({5, 9, 9, 2, 5, 2, 9});
  CHECK(cost2(a, m, p) == cost2(b, m, p));
  CHECK(cost2m(a, m, p) == cost2m(b, m, p));
  CHECK(cost1(a, m, p) == cost1(b, m, p));
}

TEST_CASE("greedy clustering thresholds") {
  Rng rng(55);
  const auto m = random_matrix(6, rng);
  const Clustering all_split = greedy_cluster(m, 0.0);
  CHECK(all_split.cluster_count() == 6);
  const Clustering all_merged = greedy_cluster(m, 1e18);
  CHECK(all_merged.cluster_count() == 1);

  // seed-based growth: everything within the threshold of the seed joins it
  const auto two_groups = matrix_from(
      {
          {0, 1, 1, 9, 9, 9},
          {1, 0, 1, 9, 9, 9},
          {1, 1, 0, 9, 9, 9},
          {9, 9, 9, 0, 1, 1},
          {9, 9, 9, 1, 0, 1},
          {9, 9, 9, 1, 1, 0},
      },
      DistanceKind::dv);
  const Clustering grouped = greedy_cluster(two_groups, 2.0);
  CHECK(grouped.cluster_count() == 2);
  CHECK(grouped.clusters()[0] == std::vector<int>{0, 1, 2});
}

TEST_CASE("brute force enumerates Bell(n) partitions and guards large n") {
  Rng rng(65);
  const auto m = random_matrix(3, rng);
  long count = 0;
  for_each_partition(3, [&](const Clustering&) { ++count; });
  CHECK(count == 5);  // Bell(3)

  const auto single = matrix_from({{0}}, DistanceKind::dv);
  CostParams p;
  const auto [best, cost] = brute_force_best(single, CostKind::cost2, p);
  CHECK(best.cluster_count() == 1);
  CHECK(cost == doctest::Approx(g_of_c(1, p.delta_r, p.gamma, p.t_horizon)));

  DistanceMatrix big;
  big.kind = DistanceKind::dv;
  big.n = 11;
  big.values.assign(121, 0.0);
  CHECK_THROWS_AS(brute_force_best(big, CostKind::cost2, p), std::invalid_argument);
}

TEST_CASE("summary statistics and clustering file round-trip") {
  Rng rng(75);
  const auto m = random_matrix(5, rng);
  const Clustering a = Clustering::from_assignment({0, 0, 1, 1, 1});
  const ClusterSummary s = summarize(a, m);
  REQUIRE(s.centroids.size() == 2);
  CHECK(s.eps_bar <= s.eps_bar_m + 1e-12);
  for (std::size_t c = 0; c < s.centroids.size(); ++c) {
    bool member = false;
    for (int task : a.clusters()[c]) member = member || task == s.centroids[c];
    CHECK(member);
  }

  ClusteringFile file;
  file.clustering = a;
  file.summary_kind = DistanceKind::dv;
  file.summary = s;
  file.cost = 12.5;
  const std::string text = serialize_clustering(file);
  std::stringstream in(text);
  const ClusteringFile back = parse_clustering(in);
  CHECK(back.clustering == a);
  REQUIRE(back.summary.has_value());
  CHECK(back.summary->eps_bar == doctest::Approx(s.eps_bar));
  CHECK(back.cost == doctest::Approx(12.5));
}
