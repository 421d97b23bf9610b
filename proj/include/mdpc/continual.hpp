#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdpc/cluster_search.hpp"
#include "mdpc/exp3.hpp"

namespace mdpc {

// Growing library of solved tasks with incremental pairwise distance caches.
class TaskLibrary {
 public:
  void add(SolvedTask task);
  int size() const { return static_cast<int>(tasks_.size()); }
  const SolvedTask& task(int i) const { return tasks_[static_cast<std::size_t>(i)]; }
  const std::vector<SolvedTask>& tasks() const { return tasks_; }

  // Full matrix over the current library; previously computed pairs are
  // reused, only pairs towards new tasks are evaluated.
  DistanceMatrix matrix(DistanceKind kind);

 private:
  double pair_distance(DistanceKind kind, int i, int j);

  std::vector<SolvedTask> tasks_;
  std::map<std::pair<int, int>, double> dv_cache_;
  std::map<std::pair<int, int>, double> dm_cache_;
  // cross-policy values V_i^{pi_j}(s0) keyed by (task, policy signature)
  std::map<std::pair<int, std::uint64_t>, double> value_cache_;
};

// One optimal policy per cluster: the canonical policy of the centroid under
// the given matrix, clusters in canonical order.
std::vector<StationaryPolicy> source_policies(const Clustering& a, const TaskLibrary& library,
                                              const DistanceMatrix& dist);

enum class SourceMode { full, sans, handpicked, greedy };

std::string to_string(SourceMode mode);
SourceMode source_mode_from_string(const std::string& s);

struct ContinualParams {
  int recluster_interval = 10;  // J; <= 0 disables re-clustering
  SourceMode mode = SourceMode::full;
  CostKind cost = CostKind::cost2;
  DistanceKind distance = DistanceKind::dv;
  CostParams cost_params;
  SearchParams search;
  TransferParams transfer;
  double solve_tol = 1e-9;
  std::vector<int> handpicked;           // task indices, handpicked mode
  std::vector<double> greedy_thresholds;  // candidate thresholds, greedy mode
};

struct ClusterEvent {
  int after_task = 0;  // library size when the clustering was computed
  Clustering clustering;
  double cost = 0.0;
};

struct TaskOutcome {
  int task_index = 0;
  int prev_tasks = 0;
  int sources_used = 0;
  std::uint64_t seed = 0;
  LearningRecord record;
};

struct ContinualResult {
  std::vector<TaskOutcome> outcomes;
  std::vector<ClusterEvent> events;
};

// Stream of target tasks; index is 0-based arrival order.
using TaskStream = std::function<TabularMDP(int index)>;

// Archive callbacks; the CLI wires these to files, tests may ignore them.
struct ArchiveHooks {
  std::function<void(const TaskOutcome&)> on_task;
  std::function<void(const ClusterEvent&)> on_cluster;
};

// Algorithm-4 loop: transfer into each arriving task with the current source
// set, solve it exactly, append it to the library, re-cluster every J tasks.
// `full` uses the latest clustering (empty source set before the first
// event); `sans` always uses every previous policy; `greedy` re-clusters with
// the best-cost greedy threshold; `handpicked` uses a fixed task list.
// A failed clustering leaves the previous clustering in force.
ContinualResult continual_transfer(const TaskStream& stream, int n_tasks,
                                   const ContinualParams& params, std::uint64_t master_seed,
                                   const ArchiveHooks& hooks = {});

}  // namespace mdpc
