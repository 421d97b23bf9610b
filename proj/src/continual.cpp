#include "mdpc/continual.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdpc {

namespace {

std::uint64_t policy_signature(const StationaryPolicy& pi) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int a : pi.action) {
    h ^= static_cast<std::uint64_t>(a) + 0x9e3779b97f4a7c15ULL;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void TaskLibrary::add(SolvedTask task) {
  if (!tasks_.empty() && !same_spaces(tasks_.front().mdp, task.mdp))
    throw std::invalid_argument("library: task space mismatch");
  tasks_.push_back(std::move(task));
}

double TaskLibrary::pair_distance(DistanceKind kind, int i, int j) {
  auto& cache = kind == DistanceKind::dv ? dv_cache_ : dm_cache_;
  const auto key = std::make_pair(std::min(i, j), std::max(i, j));
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  double d = 0.0;
  if (kind == DistanceKind::dm) {
    d = d_m(tasks_[static_cast<std::size_t>(i)].mdp, tasks_[static_cast<std::size_t>(j)].mdp);
  } else {
    auto cross = [&](int task, int owner) {
      const std::uint64_t sig = policy_signature(tasks_[static_cast<std::size_t>(owner)].policy);
      const auto vkey = std::make_pair(task, sig);
      if (auto it = value_cache_.find(vkey); it != value_cache_.end()) return it->second;
      const auto& t = tasks_[static_cast<std::size_t>(task)];
      const ValueFunction v = evaluate_policy(t.mdp, tasks_[static_cast<std::size_t>(owner)].policy);
      const double value = v.v[static_cast<std::size_t>(t.mdp.initial_state)];
      value_cache_.emplace(vkey, value);
      return value;
    };
    const auto& ti = tasks_[static_cast<std::size_t>(i)];
    const auto& tj = tasks_[static_cast<std::size_t>(j)];
    d = std::max({ti.v_star_initial() - cross(i, j), tj.v_star_initial() - cross(j, i), 0.0});
  }
  cache.emplace(key, d);
  return d;
}

DistanceMatrix TaskLibrary::matrix(DistanceKind kind) {
  DistanceMatrix m;
  m.kind = kind;
  m.n = size();
  m.values.assign(static_cast<std::size_t>(m.n) * static_cast<std::size_t>(m.n), 0.0);
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j) {
      const double d = pair_distance(kind, i, j);
      m.at(i, j) = d;
      m.at(j, i) = d;
    }
  return m;
}

std::vector<StationaryPolicy> source_policies(const Clustering& a, const TaskLibrary& library,
                                              const DistanceMatrix& dist) {
  if (a.n_tasks() > library.size() || a.n_tasks() != dist.n)
    throw std::invalid_argument("source_policies: clustering does not match the library");
  std::vector<StationaryPolicy> out;
  out.reserve(static_cast<std::size_t>(a.cluster_count()));
  for (const auto& cluster : a.clusters()) out.push_back(library.task(centroid(cluster, dist)).policy);
  return out;
}

std::string to_string(SourceMode mode) {
  switch (mode) {
    case SourceMode::full: return "full";
    case SourceMode::sans: return "sans";
    case SourceMode::handpicked: return "handpicked";
    case SourceMode::greedy: return "greedy";
  }
  throw std::logic_error("bad source mode");
}

SourceMode source_mode_from_string(const std::string& s) {
  if (s == "full") return SourceMode::full;
  if (s == "sans") return SourceMode::sans;
  if (s == "handpicked") return SourceMode::handpicked;
  if (s == "greedy") return SourceMode::greedy;
  throw std::runtime_error("continual: unknown source mode '" + s + "'");
}

ContinualResult continual_transfer(const TaskStream& stream, int n_tasks,
                                   const ContinualParams& params, std::uint64_t master_seed,
                                   const ArchiveHooks& hooks) {
  if (n_tasks < 1) throw std::invalid_argument("continual: need at least one task");
  ContinualResult result;
  TaskLibrary library;
  std::optional<ClusterEvent> current;

  for (int h = 0; h < n_tasks; ++h) {
    TabularMDP target = stream(h);

    std::vector<StationaryPolicy> sources;
    switch (params.mode) {
      case SourceMode::sans:
        for (const auto& t : library.tasks()) sources.push_back(t.policy);
        break;
      case SourceMode::handpicked:
        for (int idx : params.handpicked)
          if (idx >= 0 && idx < library.size()) sources.push_back(library.task(idx).policy);
        break;
      case SourceMode::full:
      case SourceMode::greedy:
        if (current) {
          const DistanceMatrix dist = library.matrix(params.distance);
          // the clustering covers the library prefix it was computed on
          DistanceMatrix prefix;
          prefix.kind = dist.kind;
          prefix.n = current->clustering.n_tasks();
          prefix.values.assign(static_cast<std::size_t>(prefix.n) * static_cast<std::size_t>(prefix.n), 0.0);
          for (int i = 0; i < prefix.n; ++i)
            for (int j = 0; j < prefix.n; ++j) prefix.at(i, j) = dist.at(i, j);
          sources = source_policies(current->clustering, library, prefix);
        }
        break;
    }

    TaskOutcome outcome;
    outcome.task_index = h;
    outcome.prev_tasks = library.size();
    outcome.sources_used = static_cast<int>(sources.size());
    outcome.seed = derive_seed(master_seed, "continual.task", static_cast<std::uint64_t>(h));
    outcome.record = exp3_transfer_run(target, sources, params.transfer, outcome.seed);

    library.add(solve_task(std::move(target), params.solve_tol));

    if (hooks.on_task) hooks.on_task(outcome);
    result.outcomes.push_back(std::move(outcome));

    const bool recluster = params.recluster_interval > 0 &&
                           (h + 1) % params.recluster_interval == 0 &&
                           (params.mode == SourceMode::full || params.mode == SourceMode::greedy);
    if (!recluster) continue;
    try {
      const DistanceMatrix dist = library.matrix(params.distance);
      ClusterEvent event;
      event.after_task = library.size();
      if (params.mode == SourceMode::greedy) {
        bool have = false;
        for (double threshold : params.greedy_thresholds) {
          Clustering candidate = greedy_cluster(dist, threshold);
          const double cost = clustering_cost(params.cost, candidate, dist, params.cost_params);
          if (!have || cost < event.cost) {
            event.clustering = std::move(candidate);
            event.cost = cost;
            have = true;
          }
        }
        if (!have) throw std::runtime_error("continual: greedy mode needs thresholds");
      } else {
        const std::uint64_t seed =
            derive_seed(master_seed, "continual.cluster", static_cast<std::uint64_t>(h));
        SearchResult found =
            search_clusterings(dist, params.cost, params.cost_params, params.search, seed);
        event.clustering = std::move(found.best);
        event.cost = found.best_cost;
      }
      if (hooks.on_cluster) hooks.on_cluster(event);
      current = event;
      result.events.push_back(std::move(event));
    } catch (const std::exception&) {
      // keep the previous clustering in force
    }
  }
  return result;
}

}  // namespace mdpc
