#include "mdpc/cluster_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdpc {

namespace {

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// inverse-CDF sample from PE truncated to {1..support}
int sample_pe(int support, double theta1, Rng& rng) {
  if (support == 1) return 1;
  const double u = rng.next_double();
  const double tail = 1.0 - std::exp(-theta1 * support);
  const int k = static_cast<int>(std::ceil(-std::log1p(-u * tail) / theta1));
  return std::clamp(k, 1, support);
}

}  // namespace

double log_pe_truncated(int k, int support, double theta1) {
  if (k < 1 || k > support) throw std::invalid_argument("pe_truncated: k out of range");
  if (!(theta1 > 0.0)) throw std::invalid_argument("pe_truncated: theta1 must be > 0");
  return -theta1 * (k - 1.0) + std::log1p(-std::exp(-theta1)) -
         std::log1p(-std::exp(-theta1 * support));
}

double pe_truncated(int k, int support, double theta1) {
  return std::exp(log_pe_truncated(k, support, theta1));
}

double log_move_density(int n_clusters, int source_size, int k, double theta1) {
  return -2.0 * std::log(static_cast<double>(n_clusters)) +
         log_pe_truncated(k, source_size, theta1) - log_choose(source_size, k);
}

ClusterProposal propose_move(const Clustering& a, double theta1, Rng& rng) {
  if (a.n_tasks() < 1) throw std::invalid_argument("propose_move: empty clustering");
  const int n_clusters = a.cluster_count();
  const int src = rng.next_int(n_clusters);
  const std::vector<int>& source = a.cluster(src);
  const int source_size = static_cast<int>(source.size());
  const int k = sample_pe(source_size, theta1, rng);

  // uniform k-subset via partial Fisher-Yates
  std::vector<int> pool = source;
  for (int i = 0; i < k; ++i) {
    const int j = i + rng.next_int(static_cast<int>(pool.size()) - i);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  std::vector<int> moved(pool.begin(), pool.begin() + k);
  std::sort(moved.begin(), moved.end());

  // destination: the other clusters plus one fresh cluster
  const int pick = rng.next_int(n_clusters);
  const bool to_new = pick == n_clusters - 1;
  const int dest = to_new ? -1 : (pick >= src ? pick + 1 : pick);

  ClusterProposal out;
  out.move.source_cluster = src;
  out.move.dest_cluster = dest;
  out.move.moved_members = moved;

  std::vector<int> labels = a.assignment();
  const int new_label = n_clusters;  // unused label id; canonicalized away
  const int dest_label = to_new ? new_label : dest;
  for (int task : moved) labels[static_cast<std::size_t>(task)] = dest_label;
  out.next = Clustering::from_assignment(labels);

  out.log_forward = log_move_density(n_clusters, source_size, k, theta1);
  const bool whole = k == source_size;
  if (!whole && !to_new) {
    out.move.tag = MoveCase::between_existing;
    const int dest_size = static_cast<int>(a.cluster(dest).size());
    out.log_reverse = log_move_density(n_clusters, dest_size + k, k, theta1);
  } else if (!whole && to_new) {
    out.move.tag = MoveCase::to_new;
    out.log_reverse = log_move_density(n_clusters + 1, k, k, theta1);
  } else if (whole && !to_new) {
    out.move.tag = MoveCase::whole_to_existing;
    const int dest_size = static_cast<int>(a.cluster(dest).size());
    out.log_reverse = log_move_density(n_clusters - 1, dest_size + k, k, theta1);
  } else {
    // whole cluster to a new cluster: the partition is unchanged
    out.move.tag = MoveCase::whole_to_new;
    out.log_reverse = out.log_forward;
  }
  return out;
}

Clustering ClusteringKernel::sample_initial(Rng& rng) const {
  std::vector<int> labels(static_cast<std::size_t>(n_tasks_), 0);
  for (auto& l : labels) l = rng.next_int(n_tasks_);
  return Clustering::from_assignment(labels);
}

std::size_t CachedClusteringCost::VecHash::operator()(const std::vector<int>& v) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int x : v) {
    h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

CachedClusteringCost::CachedClusteringCost(CostKind kind, const DistanceMatrix& dist,
                                           const CostParams& params)
    : kind_(kind), dist_(&dist), params_(params) {}

CachedClusteringCost::ClusterStats CachedClusteringCost::compute(
    const std::vector<int>& cluster) const {
  ClusterStats s{};
  const int c = centroid(cluster, *dist_);
  double eps = 0.0;
  double total = 0.0;
  for (int member : cluster) {
    eps = std::max(eps, dist_->at(c, member));
    double worst = 0.0;
    for (int other : cluster) worst = std::max(worst, dist_->at(member, other));
    total += worst;
  }
  s.eps_centroid = eps;
  s.sum_member_max = total;
  return s;
}

CachedClusteringCost::ClusterStats CachedClusteringCost::stats(
    const std::vector<int>& cluster) const {
  // tiny clusters are cheaper to recompute than to cache
  if (cluster.size() == 1) return {0.0, 0.0};
  if (cluster.size() == 2) {
    const double d = dist_->at(cluster[0], cluster[1]);
    return {d, 2.0 * d};
  }
  auto it = cache_.find(cluster);
  if (it != cache_.end()) return it->second;
  if (cache_.size() >= kMaxCacheEntries) cache_.clear();
  return cache_.emplace(cluster, compute(cluster)).first->second;
}

double CachedClusteringCost::operator()(const Clustering& a) const {
  const double g = g_of_c(a.cluster_count(), params_.delta_r, params_.gamma, params_.t_horizon);
  switch (kind_) {
    case CostKind::cost1: {
      double eps = 0.0;
      for (const auto& cluster : a.clusters()) eps = std::max(eps, stats(cluster).eps_centroid);
      return g + k_m(eps, params_.gamma, params_.r_max);
    }
    case CostKind::cost2: {
      double weighted = 0.0;
      for (const auto& cluster : a.clusters())
        weighted += static_cast<double>(cluster.size()) * stats(cluster).eps_centroid;
      return g + weighted / static_cast<double>(a.n_tasks());
    }
    case CostKind::cost2m: {
      double total = 0.0;
      for (const auto& cluster : a.clusters()) total += stats(cluster).sum_member_max;
      return g + total / static_cast<double>(a.n_tasks());
    }
  }
  throw std::runtime_error("cluster_search: bad cost kind");
}

LambdaLadder exponent_ladder(double beta_min, double beta_max, int rungs, double alpha_prime) {
  if (!(beta_min > 0.0 && beta_max > beta_min))
    throw std::invalid_argument("exponent_ladder: need 0 < beta_min < beta_max");
  if (rungs < 2) throw std::invalid_argument("exponent_ladder: need at least 2 rungs");
  LambdaLadder ladder;
  ladder.alpha_prime = alpha_prime;
  const double ratio = std::pow(beta_max / beta_min, 1.0 / (rungs - 1));
  double beta = beta_min;
  for (int i = 0; i < rungs; ++i) {
    ladder.values.push_back(std::exp(beta));
    beta *= ratio;
  }
  ladder.validate();
  return ladder;
}

SearchResult search_clusterings(const DistanceMatrix& dist, CostKind cost_kind,
                                const CostParams& cost_params, const SearchParams& search,
                                std::uint64_t seed, const TraceSink& trace) {
  if (dist.n < 1) throw std::invalid_argument("search_clusterings: empty distance matrix");
  CachedClusteringCost cached(cost_kind, dist, cost_params);
  auto cost_fn = [&cached](const Clustering& a) { return cached(a); };
  ClusteringKernel kernel(dist.n, search.theta1);

  LambdaLadder ladder;
  if (search.explicit_ladder) {
    ladder = *search.explicit_ladder;
  } else {
    const double gstep =
        g_of_c(2, cost_params.delta_r, cost_params.gamma, cost_params.t_horizon) -
        g_of_c(1, cost_params.delta_r, cost_params.gamma, cost_params.t_horizon);
    ladder = exponent_ladder(search.base_factor / gstep, search.top_factor / gstep,
                             search.ladder_rungs, search.alpha_prime);
  }

  auto result = run_mhav<Clustering>(cost_fn, kernel, ladder, search.mhav, seed, trace);
  return {std::move(result.best), result.best_cost};
}

}  // namespace mdpc
