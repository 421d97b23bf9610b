#pragma once

#include <cstdint>

#include "mdpc/config.hpp"
#include "mdpc/continual.hpp"
#include "mdpc/domains.hpp"

namespace mdpc {

// Task streams behind the continual loop and the reporting experiments.
// Tasks cycle through `groups` base target sequences; each arrival re-draws
// every target as a uniform member of its own block (or graph group), so
// tasks within a group stay policy-close while groups stay far apart.
struct SurveillanceStreamConfig {
  int targets_per_task = 2;
  int groups = 3;
  double gamma = 0.9;
};

TaskStream surveillance_stream(const SurveillanceLayout& layout,
                               const SurveillanceStreamConfig& cfg, std::uint64_t seed);

// Uniform (goal, wind) draws.
TaskStream windy_stream(const WindyCorridorSpec& spec, std::uint64_t seed);

// Builds the stream plus matching cost parameters from a continual config.
struct ContinualSetup {
  TaskStream stream;
  int n_tasks = 0;
  ContinualParams params;
  std::uint64_t master_seed = 0;
};

ContinualSetup continual_setup_from_config(const KvConfig& cfg);

}  // namespace mdpc
