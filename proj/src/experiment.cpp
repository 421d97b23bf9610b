#include "mdpc/experiment.hpp"

#include <sstream>
#include <stdexcept>
#include <vector>

namespace mdpc {

TaskStream surveillance_stream(const SurveillanceLayout& layout,
                               const SurveillanceStreamConfig& cfg, std::uint64_t seed) {
  layout.validate();
  if (cfg.groups < 1) throw std::invalid_argument("stream: groups must be >= 1");
  const int n_vloc = static_cast<int>(layout.v_locations.size());
  if (cfg.targets_per_task < 1 || cfg.targets_per_task > 4 || cfg.targets_per_task > n_vloc)
    throw std::invalid_argument("stream: bad targets_per_task");

  // group members per block for substitution draws
  std::vector<std::vector<int>> block_members;
  for (int v = 0; v < n_vloc; ++v) {
    const int b = layout.block_of[static_cast<std::size_t>(v)];
    if (b >= static_cast<int>(block_members.size())) block_members.resize(static_cast<std::size_t>(b) + 1);
    block_members[static_cast<std::size_t>(b)].push_back(v);
  }

  // fixed base sequence per group, distinct targets
  std::vector<std::vector<int>> base(static_cast<std::size_t>(cfg.groups));
  for (int g = 0; g < cfg.groups; ++g) {
    Rng rng(derive_seed(seed, "stream.base", static_cast<std::uint64_t>(g)));
    std::vector<int>& targets = base[static_cast<std::size_t>(g)];
    while (static_cast<int>(targets.size()) < cfg.targets_per_task) {
      const int v = rng.next_int(n_vloc);
      bool fresh = true;
      for (int t : targets)
        if (t == v || layout.block_of[static_cast<std::size_t>(t)] ==
                          layout.block_of[static_cast<std::size_t>(v)])
          fresh = false;
      if (fresh) targets.push_back(v);
    }
  }

  return [layout, cfg, seed, base, block_members](int index) {
    Rng rng(derive_seed(seed, "stream.task", static_cast<std::uint64_t>(index)));
    const std::vector<int>& group_base = base[static_cast<std::size_t>(index % cfg.groups)];
    std::vector<int> targets;
    for (int t : group_base) {
      const auto& mates = block_members[static_cast<std::size_t>(layout.block_of[static_cast<std::size_t>(t)])];
      targets.push_back(mates[static_cast<std::size_t>(rng.next_int(static_cast<int>(mates.size())))]);
    }
    return surveillance(layout, targets, cfg.gamma);
  };
}

TaskStream windy_stream(const WindyCorridorSpec& spec, std::uint64_t seed) {
  return [spec, seed](int index) {
    Rng rng(derive_seed(seed, "stream.task", static_cast<std::uint64_t>(index)));
    const int goal = rng.next_int(spec.width);
    const int wind = rng.next_int(10);
    return windy_corridor(goal, wind, spec);
  };
}

ContinualSetup continual_setup_from_config(const KvConfig& cfg) {
  ContinualSetup setup;
  setup.master_seed = static_cast<std::uint64_t>(cfg.get_long("master_seed", 1));
  setup.n_tasks = cfg.get_int("stream_count");

  const std::string domain = cfg.get_or("domain", "surveillance");
  const double gamma = cfg.get_double("gamma", 0.9);
  double delta_r = 0.0;
  double r_max = 0.0;

  if (domain == "surveillance") {
    SurveillanceLayout layout =
        cfg.get_int("grid", 12) == 48 ? SurveillanceLayout::full48() : SurveillanceLayout::scaled12();
    SurveillanceStreamConfig stream_cfg;
    stream_cfg.targets_per_task = cfg.get_int("targets_per_task", 2);
    stream_cfg.groups = cfg.get_int("groups", 3);
    stream_cfg.gamma = gamma;
    setup.stream = surveillance_stream(layout, stream_cfg,
                                       derive_seed(setup.master_seed, "stream"));
    SurveillanceRewards rewards;
    delta_r = rewards.correct - rewards.wrong;
    r_max = rewards.correct;
  } else if (domain == "windy_corridor") {
    WindyCorridorSpec spec;
    spec.gamma = gamma;
    setup.stream = windy_stream(spec, derive_seed(setup.master_seed, "stream"));
    delta_r = spec.goal_reward;
    r_max = spec.goal_reward;
  } else {
    throw std::runtime_error("config: unknown domain '" + domain + "'");
  }

  ContinualParams& p = setup.params;
  p.recluster_interval = cfg.get_int("J", 10);
  p.mode = source_mode_from_string(cfg.get_or("mode", "full"));
  p.cost = cost_kind_from_string(cfg.get_or("cost", "cost2"));
  p.distance = distance_kind_from_string(cfg.get_or("distance", "dv"));
  p.cost_params.delta_r = cfg.get_double("delta_r", delta_r);
  p.cost_params.r_max = cfg.get_double("r_max", r_max);
  p.cost_params.gamma = gamma;
  p.cost_params.t_horizon = cfg.get_long("T", 10000);

  p.search.ladder_rungs = cfg.get_int("ladder_n", 40);
  p.search.alpha_prime = cfg.get_double("alpha_prime", 0.5);
  p.search.base_factor = cfg.get_double("ladder_base_factor", 20.0);
  p.search.top_factor = cfg.get_double("ladder_top_factor", 80.0);
  p.search.mhav.alpha = cfg.get_double("mhav_alpha", 0.1);
  p.search.mhav.beta = cfg.get_double("mhav_beta", 0.8);
  p.search.mhav.iterations = cfg.get_long("tm", 100000);
  p.search.mhav.restarts = cfg.get_int("restarts", 20);
  p.search.theta1 = cfg.get_double("theta1", 1.0);

  p.transfer.beta = cfg.get_double("beta", 0.0);
  p.transfer.t_episodes = cfg.get_long("T", 10000);
  p.transfer.elimination_interval = cfg.get_int("l", 50);
  p.transfer.delta = cfg.get_double("delta", 0.1);
  p.transfer.horizon = cfg.get_int("horizon", 200);
  p.transfer.qlearn.alpha = cfg.get_double("qlearn_alpha", 0.5);
  p.transfer.qlearn.epsilon = cfg.get_double("qlearn_epsilon", 0.2);
  p.transfer.qlearn.epsilon_decay = cfg.get_double("qlearn_decay", 0.999);
  p.solve_tol = cfg.get_double("solve_tol", 1e-9);

  if (cfg.has("handpicked")) {
    std::stringstream ss(cfg.get("handpicked"));
    int idx;
    while (ss >> idx) p.handpicked.push_back(idx);
  }
  if (cfg.has("greedy_thresholds")) {
    std::stringstream ss(cfg.get("greedy_thresholds"));
    double t;
    while (ss >> t) p.greedy_thresholds.push_back(t);
  }
  return setup;
}

}  // namespace mdpc
