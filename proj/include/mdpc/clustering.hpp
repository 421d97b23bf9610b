#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mdpc/distance.hpp"

namespace mdpc {

// A partition of task indices {0..N-1}. Canonical form: members sorted
// within a cluster, clusters ordered by smallest member, no empty clusters.
class Clustering {
 public:
  static Clustering singletons(int n);
  static Clustering one_cluster(int n);
  // Builds the canonical form from an arbitrary task -> label map.
  static Clustering from_assignment(const std::vector<int>& labels);

  int n_tasks() const { return static_cast<int>(assignment_.size()); }
  int cluster_count() const { return static_cast<int>(clusters_.size()); }
  const std::vector<int>& assignment() const { return assignment_; }
  const std::vector<std::vector<int>>& clusters() const { return clusters_; }
  const std::vector<int>& cluster(int c) const { return clusters_[static_cast<std::size_t>(c)]; }
  int cluster_of(int task) const { return assignment_[static_cast<std::size_t>(task)]; }

  bool operator==(const Clustering& other) const { return assignment_ == other.assignment_; }

 private:
  std::vector<int> assignment_;            // task -> canonical cluster id
  std::vector<std::vector<int>> clusters_;  // canonical cluster list
};

// Member minimizing the maximum distance to the rest of the cluster;
// ties go to the smallest task index. Throws on an empty cluster.
int centroid(const std::vector<int>& cluster, const DistanceMatrix& dist);

struct CostParams {
  double delta_r = 1.0;   // reward range of the family
  double r_max = 1.0;     // reward upper bound (enters k_m)
  double gamma = 0.9;
  long t_horizon = 10000;  // transfer episode budget T
};

// Bandit-regret term: delta_r (1-gamma)^-1 2.63 sqrt((c+1) ln(c+1) / T).
double g_of_c(int c, double delta_r, double gamma, long t_horizon);

enum class CostKind { cost1, cost2, cost2m };

std::string to_string(CostKind kind);
CostKind cost_kind_from_string(const std::string& s);

// cost1 = g(c) + k_m(max cluster diameter), measured to the d_M centroid.
double cost1(const Clustering& a, const DistanceMatrix& dist_dm, const CostParams& p);
// cost2 = g(c) + mean over tasks of their cluster's centroid diameter (d_V).
double cost2(const Clustering& a, const DistanceMatrix& dist_dv, const CostParams& p);
// cost2m = g(c) + mean over tasks of each member's own max distance.
double cost2m(const Clustering& a, const DistanceMatrix& dist_dv, const CostParams& p);

double clustering_cost(CostKind kind, const Clustering& a, const DistanceMatrix& dist,
                       const CostParams& p);

// Seeds a cluster with the lowest unassigned index and absorbs every
// unassigned task within `threshold` of the seed. Deterministic.
Clustering greedy_cluster(const DistanceMatrix& dist, double threshold);

// Exhaustive search over all set partitions (restricted-growth enumeration,
// lexicographically first among cost ties). Refuses n > 10.
std::pair<Clustering, double> brute_force_best(
    const DistanceMatrix& dist, const std::function<double(const Clustering&)>& cost_fn);
std::pair<Clustering, double> brute_force_best(const DistanceMatrix& dist, CostKind kind,
                                               const CostParams& p);

// Calls fn for every partition of {0..n-1}; used by the oracle CLI.
void for_each_partition(int n, const std::function<void(const Clustering&)>& fn);

// Diameter statistics of a clustering against one distance matrix.
struct ClusterSummary {
  std::vector<int> centroids;     // per canonical cluster
  std::vector<double> eps_i;      // per-cluster max centroid-to-member distance
  double eps_max = 0.0;           // max over clusters of eps_i
  double eps_bar = 0.0;           // (1/N) sum |A_i| eps_i
  double eps_bar_m = 0.0;         // (1/N) sum over members of their max distance
};

ClusterSummary summarize(const Clustering& a, const DistanceMatrix& dist);

// Clustering file: "clustering 1", "n_tasks N", N "task cluster" lines, then
// a summary block (kind, c, eps, eps_bar, eps_bar_m, cost) when available.
struct ClusteringFile {
  Clustering clustering;
  std::optional<DistanceKind> summary_kind;
  std::optional<ClusterSummary> summary;
  std::optional<double> cost;
};

std::string serialize_clustering(const ClusteringFile& file);
ClusteringFile parse_clustering(std::istream& in);
ClusteringFile load_clustering(const std::string& path);
void save_clustering(const std::string& path, const ClusteringFile& file);

}  // namespace mdpc
