#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "mdpc/clustering.hpp"
#include "mdpc/mhav.hpp"

namespace mdpc {

// Truncated exponential pmf over {1..support}:
// PE(k) = e^{-theta1 k} (1 - e^{-theta1}) / (e^{-theta1} (1 - e^{-theta1 support})).
double pe_truncated(int k, int support, double theta1);
double log_pe_truncated(int k, int support, double theta1);

enum class MoveCase { between_existing, to_new, whole_to_existing, whole_to_new };

struct ClusterMove {
  int source_cluster = 0;           // canonical id in the pre-move clustering
  int dest_cluster = -1;            // canonical id, or -1 for a new cluster
  std::vector<int> moved_members;   // sorted task indices
  MoveCase tag = MoveCase::between_existing;
};

struct ClusterProposal {
  Clustering next;
  ClusterMove move;
  double log_forward = 0.0;
  double log_reverse = 0.0;
};

// Density of one forward move: pick a cluster uniformly among N, pick k via
// PE truncated to the source size, pick a uniform k-subset, pick the
// destination uniformly among the other clusters plus one fresh cluster:
//   N^-2 PE(k; |A_src|) C(|A_src|, k)^-1.
double log_move_density(int n_clusters, int source_size, int k, double theta1);

// Samples one kernel move and returns the resulting canonical clustering with
// the exact forward and reverse proposal log-densities (the reverse follows
// the four case formulas; whole-cluster-to-new leaves the partition intact
// with ratio 1).
ClusterProposal propose_move(const Clustering& a, double theta1, Rng& rng);

// Kernel adapter for MhavChain / run_mhav over clusterings.
class ClusteringKernel {
 public:
  ClusteringKernel(int n_tasks, double theta1) : n_tasks_(n_tasks), theta1_(theta1) {}

  struct Proposal {
    Clustering point;
    double log_forward;
    double log_reverse;
  };

  Proposal propose(const Clustering& a, Rng& rng) const {
    ClusterProposal p = propose_move(a, theta1_, rng);
    return {std::move(p.next), p.log_forward, p.log_reverse};
  }

  // Fresh uniform random label vector, canonicalized.
  Clustering sample_initial(Rng& rng) const;

 private:
  int n_tasks_;
  double theta1_;
};

// Memoizing clustering cost: per-cluster diameter statistics are cached by
// member list, so repeated proposals touching few clusters stay cheap.
class CachedClusteringCost {
 public:
  CachedClusteringCost(CostKind kind, const DistanceMatrix& dist, const CostParams& params);
  double operator()(const Clustering& a) const;

 private:
  struct ClusterStats {
    double eps_centroid;    // max distance from the centroid
    double sum_member_max;  // sum over members of their max distance
  };
  static constexpr std::size_t kMaxCacheEntries = 1u << 20;
  ClusterStats compute(const std::vector<int>& cluster) const;
  ClusterStats stats(const std::vector<int>& cluster) const;

  CostKind kind_;
  const DistanceMatrix* dist_;
  CostParams params_;
  struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const;
  };
  mutable std::unordered_map<std::vector<int>, ClusterStats, VecHash> cache_;
};

// Ladder with ln(lambda_i) geometric between beta_min and beta_max. Exponent
// steps are tiny at the hot end, so the chain can climb while its cost is
// still large, and grow toward the cold end where fine cost differences bite.
LambdaLadder exponent_ladder(double beta_min, double beta_max, int rungs, double alpha_prime = 0.5);

struct SearchParams {
  MhavParams mhav;
  double theta1 = 1.0;
  int ladder_rungs = 40;
  double alpha_prime = 0.5;
  // Ladder exponents anchored to the cost granularity gstep = g(2) - g(1):
  // the first rung rejects a +gstep/base_factor move at rate 1 - 1/e, upper
  // rungs sharpen towards gstep/top_factor. The chain concentrates just
  // above the first rung (the λ^-cost pull), so base_factor carries the
  // selection pressure; small-cost landscapes roam the whole ladder.
  double base_factor = 20.0;
  double top_factor = 80.0;
  // When set, overrides the granularity-adapted ladder entirely.
  std::optional<LambdaLadder> explicit_ladder;
};

struct SearchResult {
  Clustering best;
  double best_cost = 0.0;
};

// Binds the clustering kernel and the memoized cost into run_mhav.
SearchResult search_clusterings(const DistanceMatrix& dist, CostKind cost_kind,
                                const CostParams& cost_params, const SearchParams& search,
                                std::uint64_t seed, const TraceSink& trace = nullptr);

}  // namespace mdpc
