#include "mdpc/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "mdpc/mdp_io.hpp"

namespace mdpc {

namespace {
[[noreturn]] void fail(const std::string& what) { throw std::runtime_error("clustering: " + what); }
}  // namespace

Clustering Clustering::singletons(int n) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i;
  return from_assignment(labels);
}

Clustering Clustering::one_cluster(int n) {
  return from_assignment(std::vector<int>(static_cast<std::size_t>(n), 0));
}

Clustering Clustering::from_assignment(const std::vector<int>& labels) {
  if (labels.empty()) throw std::invalid_argument("clustering: empty assignment");
  // group by label in first-seen order; first-seen order equals ordering by
  // smallest member, since tasks are scanned ascending
  std::unordered_map<int, int> slot_of;
  slot_of.reserve(labels.size());
  std::vector<std::vector<int>> groups;
  for (int task = 0; task < static_cast<int>(labels.size()); ++task) {
    const int label = labels[static_cast<std::size_t>(task)];
    auto [it, inserted] = slot_of.try_emplace(label, static_cast<int>(groups.size()));
    if (inserted) groups.emplace_back();
    groups[static_cast<std::size_t>(it->second)].push_back(task);
  }
  Clustering out;
  out.assignment_.assign(labels.size(), 0);
  for (std::size_t c = 0; c < groups.size(); ++c)
    for (int task : groups[c]) out.assignment_[static_cast<std::size_t>(task)] = static_cast<int>(c);
  out.clusters_ = std::move(groups);
  return out;
}

int centroid(const std::vector<int>& cluster, const DistanceMatrix& dist) {
  if (cluster.empty()) throw std::invalid_argument("centroid: empty cluster");
  int best = cluster.front();
  double best_radius = std::numeric_limits<double>::infinity();
  for (int candidate : cluster) {
    double radius = 0.0;
    for (int other : cluster)
      if (other != candidate) radius = std::max(radius, dist.at(candidate, other));
    if (radius < best_radius || (radius == best_radius && candidate < best)) {
      best_radius = radius;
      best = candidate;
    }
  }
  return best;
}

double g_of_c(int c, double delta_r, double gamma, long t_horizon) {
  if (c < 1) throw std::invalid_argument("g_of_c: c must be >= 1");
  if (t_horizon < 1) throw std::invalid_argument("g_of_c: t_horizon must be >= 1");
  const double cp1 = static_cast<double>(c) + 1.0;
  return delta_r / (1.0 - gamma) * 2.63 *
         std::sqrt(cp1 * std::log(cp1) / static_cast<double>(t_horizon));
}

std::string to_string(CostKind kind) {
  switch (kind) {
    case CostKind::cost1: return "cost1";
    case CostKind::cost2: return "cost2";
    case CostKind::cost2m: return "cost2m";
  }
  fail("bad cost kind");
}

CostKind cost_kind_from_string(const std::string& s) {
  if (s == "cost1") return CostKind::cost1;
  if (s == "cost2") return CostKind::cost2;
  if (s == "cost2m") return CostKind::cost2m;
  fail("unknown cost kind '" + s + "'");
}

namespace {

double centroid_diameter(const std::vector<int>& cluster, const DistanceMatrix& dist) {
  const int c = centroid(cluster, dist);
  double eps = 0.0;
  for (int member : cluster) eps = std::max(eps, dist.at(c, member));
  return eps;
}

double sum_member_max(const std::vector<int>& cluster, const DistanceMatrix& dist) {
  double total = 0.0;
  for (int member : cluster) {
    double worst = 0.0;
    for (int other : cluster) worst = std::max(worst, dist.at(member, other));
    total += worst;
  }
  return total;
}

}  // namespace

double cost1(const Clustering& a, const DistanceMatrix& dist_dm, const CostParams& p) {
  double eps = 0.0;
  for (const auto& cluster : a.clusters()) eps = std::max(eps, centroid_diameter(cluster, dist_dm));
  return g_of_c(a.cluster_count(), p.delta_r, p.gamma, p.t_horizon) + k_m(eps, p.gamma, p.r_max);
}

double cost2(const Clustering& a, const DistanceMatrix& dist_dv, const CostParams& p) {
  double weighted = 0.0;
  for (const auto& cluster : a.clusters())
    weighted += static_cast<double>(cluster.size()) * centroid_diameter(cluster, dist_dv);
  const double eps_bar = weighted / static_cast<double>(a.n_tasks());
  return g_of_c(a.cluster_count(), p.delta_r, p.gamma, p.t_horizon) + eps_bar;
}

double cost2m(const Clustering& a, const DistanceMatrix& dist_dv, const CostParams& p) {
  double total = 0.0;
  for (const auto& cluster : a.clusters()) total += sum_member_max(cluster, dist_dv);
  const double eps_bar_m = total / static_cast<double>(a.n_tasks());
  return g_of_c(a.cluster_count(), p.delta_r, p.gamma, p.t_horizon) + eps_bar_m;
}

double clustering_cost(CostKind kind, const Clustering& a, const DistanceMatrix& dist,
                       const CostParams& p) {
  switch (kind) {
    case CostKind::cost1: return cost1(a, dist, p);
    case CostKind::cost2: return cost2(a, dist, p);
    case CostKind::cost2m: return cost2m(a, dist, p);
  }
  fail("bad cost kind");
}

Clustering greedy_cluster(const DistanceMatrix& dist, double threshold) {
  if (threshold < 0.0) throw std::invalid_argument("greedy_cluster: threshold must be >= 0");
  const int n = dist.n;
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  int next_label = 0;
  for (int seed = 0; seed < n; ++seed) {
    if (labels[static_cast<std::size_t>(seed)] != -1) continue;
    labels[static_cast<std::size_t>(seed)] = next_label;
    for (int other = seed + 1; other < n; ++other) {
      if (labels[static_cast<std::size_t>(other)] != -1) continue;
      if (dist.at(seed, other) <= threshold) labels[static_cast<std::size_t>(other)] = next_label;
    }
    ++next_label;
  }
  return Clustering::from_assignment(labels);
}

void for_each_partition(int n, const std::function<void(const Clustering&)>& fn) {
  // restricted-growth strings in lexicographic order
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  std::vector<int> max_prefix(static_cast<std::size_t>(n), 0);
  for (;;) {
    fn(Clustering::from_assignment(rgs));
    int i = n - 1;
    while (i > 0) {
      if (rgs[static_cast<std::size_t>(i)] <= max_prefix[static_cast<std::size_t>(i - 1)]) break;
      --i;
    }
    if (i == 0) return;
    ++rgs[static_cast<std::size_t>(i)];
    max_prefix[static_cast<std::size_t>(i)] =
        std::max(max_prefix[static_cast<std::size_t>(i - 1)], rgs[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < n; ++j) {
      rgs[static_cast<std::size_t>(j)] = 0;
      max_prefix[static_cast<std::size_t>(j)] = max_prefix[static_cast<std::size_t>(i)];
    }
  }
}

std::pair<Clustering, double> brute_force_best(
    const DistanceMatrix& dist, const std::function<double(const Clustering&)>& cost_fn) {
  const int n = dist.n;
  if (n < 1) throw std::invalid_argument("brute_force_best: empty library");
  if (n > 10) throw std::invalid_argument("brute_force_best: refusing n > 10 (Bell growth)");
  Clustering best = Clustering::one_cluster(n);
  double best_cost = std::numeric_limits<double>::infinity();
  for_each_partition(n, [&](const Clustering& a) {
    const double c = cost_fn(a);
    if (c < best_cost) {
      best_cost = c;
      best = a;
    }
  });
  return {best, best_cost};
}

std::pair<Clustering, double> brute_force_best(const DistanceMatrix& dist, CostKind kind,
                                               const CostParams& p) {
  return brute_force_best(dist, [&](const Clustering& a) { return clustering_cost(kind, a, dist, p); });
}

ClusterSummary summarize(const Clustering& a, const DistanceMatrix& dist) {
  ClusterSummary s;
  double weighted = 0.0;
  double member_max_total = 0.0;
  for (const auto& cluster : a.clusters()) {
    const int c = centroid(cluster, dist);
    double eps = 0.0;
    for (int member : cluster) eps = std::max(eps, dist.at(c, member));
    s.centroids.push_back(c);
    s.eps_i.push_back(eps);
    s.eps_max = std::max(s.eps_max, eps);
    weighted += static_cast<double>(cluster.size()) * eps;
    member_max_total += sum_member_max(cluster, dist);
  }
  s.eps_bar = weighted / static_cast<double>(a.n_tasks());
  s.eps_bar_m = member_max_total / static_cast<double>(a.n_tasks());
  return s;
}

std::string serialize_clustering(const ClusteringFile& file) {
  const Clustering& a = file.clustering;
  std::string out = "clustering 1\nn_tasks " + std::to_string(a.n_tasks()) + "\n";
  for (int task = 0; task < a.n_tasks(); ++task)
    out += std::to_string(task) + " " + std::to_string(a.cluster_of(task)) + "\n";
  out += "summary\n";
  out += "c " + std::to_string(a.cluster_count()) + "\n";
  if (file.summary) {
    out += "kind " + to_string(file.summary_kind.value_or(DistanceKind::dv)) + "\n";
    out += "eps " + fmt_double(file.summary->eps_max) + "\n";
    out += "eps_bar " + fmt_double(file.summary->eps_bar) + "\n";
    out += "eps_bar_m " + fmt_double(file.summary->eps_bar_m) + "\n";
  }
  if (file.cost) out += "cost " + fmt_double(*file.cost) + "\n";
  return out;
}

ClusteringFile parse_clustering(std::istream& in) {
  std::string word;
  if (!(in >> word) || word != "clustering") fail("expected 'clustering' header");
  int version = 0;
  if (!(in >> version) || version != 1) fail("unsupported clustering version");
  if (!(in >> word) || word != "n_tasks") fail("expected n_tasks");
  int n = 0;
  if (!(in >> n) || n <= 0) fail("bad n_tasks");
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    int task = 0, cluster = 0;
    if (!(in >> task >> cluster)) fail("truncated assignment");
    if (task < 0 || task >= n) fail("task index out of range");
    labels[static_cast<std::size_t>(task)] = cluster;
  }
  ClusteringFile out;
  out.clustering = Clustering::from_assignment(labels);
  ClusterSummary summary;
  bool have_summary_fields = false;
  while (in >> word) {
    if (word == "summary" || word == "c") {
      int ignored;
      if (word == "c" && !(in >> ignored)) fail("bad summary c");
    } else if (word == "kind") {
      std::string kind;
      if (!(in >> kind)) fail("bad summary kind");
      out.summary_kind = distance_kind_from_string(kind);
    } else if (word == "eps") {
      if (!(in >> summary.eps_max)) fail("bad eps");
      have_summary_fields = true;
    } else if (word == "eps_bar") {
      if (!(in >> summary.eps_bar)) fail("bad eps_bar");
      have_summary_fields = true;
    } else if (word == "eps_bar_m") {
      if (!(in >> summary.eps_bar_m)) fail("bad eps_bar_m");
      have_summary_fields = true;
    } else if (word == "cost") {
      double cost = 0.0;
      if (!(in >> cost)) fail("bad cost");
      out.cost = cost;
    } else {
      fail("unexpected token '" + word + "' in summary");
    }
  }
  if (have_summary_fields) out.summary = summary;
  return out;
}

ClusteringFile load_clustering(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  return parse_clustering(in);
}

void save_clustering(const std::string& path, const ClusteringFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write " + path);
  out << serialize_clustering(file);
  if (!out) fail("write failed for " + path);
}

}  // namespace mdpc
