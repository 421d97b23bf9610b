#include "mdpc/domains.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdpc {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument("domains: " + what); }

std::size_t sa(int n_actions, int s, int a) {
  return static_cast<std::size_t>(s) * static_cast<std::size_t>(n_actions) + static_cast<std::size_t>(a);
}

}  // namespace

// actions: 0=N (y+1), 1=S, 2=E, 3=W
TabularMDP windy_corridor(int goal, int wind_level, const WindyCorridorSpec& spec) {
  const int w = spec.width;
  if (goal < 0 || goal >= w) fail("windy_corridor: goal out of range");
  if (wind_level < 0 || wind_level > 9) fail("windy_corridor: wind level out of range");
  if (spec.start_x < 0 || spec.start_x >= w) fail("windy_corridor: start out of range");
  const double p = 0.1 * wind_level;

  TabularMDP mdp;
  mdp.n_states = 2 * w;  // hallway x, then corridor cells w + x
  mdp.n_actions = 4;
  mdp.gamma = spec.gamma;
  mdp.initial_state = spec.start_x;
  mdp.r_min = 0.0;
  mdp.r_max = spec.goal_reward;
  const std::size_t n_sa = static_cast<std::size_t>(mdp.n_states) * 4u;
  mdp.reward.assign(n_sa, 0.0);
  mdp.reward_noise.assign(n_sa, 0.0);
  mdp.rows.assign(n_sa, {});

  const int goal_state = w + goal;
  auto add = [](TransitionRow& row, int state, double prob) {
    for (auto& e : row)
      if (e.state == state) {
        e.prob += prob;
        return;
      }
    row.push_back({state, prob});
  };

  for (int x = 0; x < w; ++x) {
    // hallway cell x: windy
    int intended[4];
    intended[0] = w + x;                    // N enters corridor x
    intended[1] = x;                        // S blocked by the outer wall
    intended[2] = x + 1 < w ? x + 1 : x;    // E
    intended[3] = x - 1 >= 0 ? x - 1 : x;   // W
    for (int a = 0; a < 4; ++a) {
      TransitionRow row;
      if (p > 0.0) add(row, w + x, p);
      add(row, intended[a], 1.0 - p);
      std::sort(row.begin(), row.end(), [](auto& l, auto& r) { return l.state < r.state; });
      mdp.rows[sa(4, x, a)] = std::move(row);
    }

    // corridor cell above x: deterministic, walls on three sides. The goal
    // cell absorbs and keeps paying the goal reward, so values live on the
    // reward/(1-gamma) scale the regret terms assume.
    const int c = w + x;
    if (c == goal_state) {
      for (int a = 0; a < 4; ++a) {
        mdp.rows[sa(4, c, a)] = {{c, 1.0}};
        mdp.reward[sa(4, c, a)] = spec.goal_reward;
      }
    } else {
      for (int a = 0; a < 4; ++a) mdp.rows[sa(4, c, a)] = {{a == 1 ? x : c, 1.0}};
    }
  }

  mdp.validate();
  return mdp;
}

std::vector<TabularMDP> windy_corridor_family(const WindyCorridorSpec& spec) {
  std::vector<TabularMDP> family;
  family.reserve(static_cast<std::size_t>(spec.width) * 10u);
  for (int goal = 0; goal < spec.width; ++goal)
    for (int wind = 0; wind < 10; ++wind) family.push_back(windy_corridor(goal, wind, spec));
  return family;
}

SurveillanceLayout SurveillanceLayout::scaled12() {
  SurveillanceLayout layout;
  layout.grid = 12;
  int block = 0;
  for (int by : {2, 8}) {
    for (int bx : {2, 8}) {
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          layout.v_locations.push_back({bx + dx, by + dy});
          layout.block_of.push_back(block);
        }
      ++block;
    }
  }
  layout.validate();
  return layout;
}

SurveillanceLayout SurveillanceLayout::full48() {
  SurveillanceLayout layout;
  layout.grid = 48;
  int block = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const int bx = 5 + 12 * j;
      const int by = 5 + 12 * i;
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          layout.v_locations.push_back({bx + dx, by + dy});
          layout.block_of.push_back(block);
        }
      ++block;
    }
  }
  layout.validate();
  return layout;
}

void SurveillanceLayout::validate() const {
  if (grid < 2) fail("surveillance: grid too small");
  if (v_locations.empty()) fail("surveillance: no v-locations");
  if (v_locations.size() != block_of.size()) fail("surveillance: block table size mismatch");
  for (const auto& [x, y] : v_locations)
    if (x < 0 || x >= grid || y < 0 || y >= grid) fail("surveillance: v-location out of bounds");
  for (std::size_t i = 0; i < v_locations.size(); ++i)
    for (std::size_t j = i + 1; j < v_locations.size(); ++j)
      if (v_locations[i] == v_locations[j]) fail("surveillance: duplicate v-location");
}

namespace {

// shared generator; `substitute_ok(v, target)` decides the 190-reward case
template <typename SubstituteFn>
TabularMDP build_surveillance(const SurveillanceLayout& layout, std::span<const int> targets,
                              double gamma, const SurveillanceRewards& rewards,
                              SubstituteFn substitute_ok) {
  layout.validate();
  const int n_targets = static_cast<int>(targets.size());
  if (n_targets < 1 || n_targets > 4) fail("surveillance: target sequence length must be 1..4");
  for (int t : targets)
    if (t < 0 || t >= static_cast<int>(layout.v_locations.size()))
      fail("surveillance: target v-location out of range");
  for (int i = 0; i < n_targets; ++i)
    for (int j = i + 1; j < n_targets; ++j)
      if (targets[static_cast<std::size_t>(i)] == targets[static_cast<std::size_t>(j)])
        fail("surveillance: targets must be distinct");

  const int g = layout.grid;
  const int n_pos = g * g;
  const int n_states = n_targets * n_pos + 1;
  const int terminal = n_states - 1;
  const int n_actions = 5;  // N,S,E,W,surveil

  // v-location lookup per grid cell (-1 when none)
  std::vector<int> vloc_at(static_cast<std::size_t>(n_pos), -1);
  for (std::size_t v = 0; v < layout.v_locations.size(); ++v)
    vloc_at[static_cast<std::size_t>(layout.pos_index(layout.v_locations[v][0], layout.v_locations[v][1]))] =
        static_cast<int>(v);

  TabularMDP mdp;
  mdp.n_states = n_states;
  mdp.n_actions = n_actions;
  mdp.gamma = gamma;
  mdp.initial_state = layout.pos_index(g / 2, g / 2);
  mdp.r_min = rewards.wrong;
  mdp.r_max = rewards.correct;
  const std::size_t n_sa = static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_actions);
  mdp.reward.assign(n_sa, 0.0);
  mdp.reward_noise.assign(n_sa, 0.0);
  mdp.rows.assign(n_sa, {});

  for (int progress = 0; progress < n_targets; ++progress) {
    const int target = targets[static_cast<std::size_t>(progress)];
    for (int pos = 0; pos < n_pos; ++pos) {
      const int x = pos % g;
      const int y = pos / g;
      const int state = progress * n_pos + pos;
      const int moved[4] = {
          y + 1 < g ? pos + g : pos,   // N
          y - 1 >= 0 ? pos - g : pos,  // S
          x + 1 < g ? pos + 1 : pos,   // E
          x - 1 >= 0 ? pos - 1 : pos,  // W
      };
      for (int a = 0; a < 4; ++a) {
        mdp.rows[sa(n_actions, state, a)] = {{progress * n_pos + moved[a], 1.0}};
        mdp.reward[sa(n_actions, state, a)] = rewards.step;
      }
      // surveil
      const int v = vloc_at[static_cast<std::size_t>(pos)];
      double r = rewards.wrong;
      int next = state;
      if (v == target) {
        r = rewards.correct;
        next = progress + 1 < n_targets ? (progress + 1) * n_pos + pos : terminal;
      } else if (v >= 0 && substitute_ok(v, target)) {
        r = rewards.substitute;
        next = progress + 1 < n_targets ? (progress + 1) * n_pos + pos : terminal;
      }
      mdp.rows[sa(n_actions, state, 4)] = {{next, 1.0}};
      mdp.reward[sa(n_actions, state, 4)] = r;
    }
  }
  for (int a = 0; a < n_actions; ++a) mdp.rows[sa(n_actions, terminal, a)] = {{terminal, 1.0}};

  mdp.validate();
  return mdp;
}

}  // namespace

TabularMDP surveillance(const SurveillanceLayout& layout, std::span<const int> targets,
                        double gamma, const SurveillanceRewards& rewards) {
  return build_surveillance(layout, targets, gamma, rewards, [&](int v, int target) {
    return layout.block_of[static_cast<std::size_t>(v)] ==
           layout.block_of[static_cast<std::size_t>(target)];
  });
}

bool SimilarityGraph::adjacent(int a, int b) const {
  for (const auto& [u, v] : edges)
    if ((u == a && v == b) || (u == b && v == a)) return true;
  return false;
}

GraphSurveillanceLayout GraphSurveillanceLayout::hub_spoke(int grid,
                                                           std::span<const std::array<int, 2>> hubs) {
  GraphSurveillanceLayout layout;
  layout.base.grid = grid;
  layout.graph.n_locations = static_cast<int>(hubs.size()) * 5;
  int group = 0;
  for (const auto& [hx, hy] : hubs) {
    if (hx < 1 || hx >= grid - 1 || hy < 1 || hy >= grid - 1)
      fail("hub_spoke: hub too close to the border");
    const int hub = static_cast<int>(layout.base.v_locations.size());
    layout.base.v_locations.push_back({hx, hy});
    layout.base.block_of.push_back(group);
    const std::array<std::array<int, 2>, 4> spokes = {
        {{hx, hy + 1}, {hx, hy - 1}, {hx + 1, hy}, {hx - 1, hy}}};
    for (const auto& s : spokes) {
      const int spoke = static_cast<int>(layout.base.v_locations.size());
      layout.base.v_locations.push_back(s);
      layout.base.block_of.push_back(group);
      layout.graph.edges.emplace_back(hub, spoke);
    }
    ++group;
  }
  layout.base.validate();
  return layout;
}

TabularMDP graph_surveillance(const GraphSurveillanceLayout& layout, std::span<const int> targets,
                              double gamma, const SurveillanceRewards& rewards) {
  return build_surveillance(layout.base, targets, gamma, rewards,
                            [&](int v, int target) { return layout.graph.adjacent(v, target); });
}

TabularMDP synthetic_singleton(std::span<const double> rewards, double gamma) {
  if (rewards.empty()) fail("synthetic_singleton: needs at least one action");
  TabularMDP mdp;
  mdp.n_states = 1;
  mdp.n_actions = static_cast<int>(rewards.size());
  mdp.gamma = gamma;
  mdp.initial_state = 0;
  mdp.r_min = *std::min_element(rewards.begin(), rewards.end());
  mdp.r_max = *std::max_element(rewards.begin(), rewards.end());
  mdp.reward.assign(rewards.begin(), rewards.end());
  mdp.reward_noise.assign(rewards.size(), 0.0);
  mdp.rows.assign(rewards.size(), {{0, 1.0}});
  mdp.validate();
  return mdp;
}

TabularMDP bandit_mdp(std::span<const double> arm_rewards, std::span<const double> noise_halfwidths,
                      double r_min, double r_max) {
  if (arm_rewards.empty()) fail("bandit_mdp: needs at least one arm");
  if (!noise_halfwidths.empty() && noise_halfwidths.size() != arm_rewards.size())
    fail("bandit_mdp: noise table size mismatch");
  TabularMDP mdp;
  mdp.n_states = 2;
  mdp.n_actions = static_cast<int>(arm_rewards.size());
  mdp.gamma = 0.0;
  mdp.initial_state = 0;
  mdp.r_min = r_min;
  mdp.r_max = r_max;
  const std::size_t n_sa = 2u * arm_rewards.size();
  mdp.reward.assign(n_sa, 0.0);
  mdp.reward_noise.assign(n_sa, 0.0);
  mdp.rows.assign(n_sa, {});
  for (std::size_t a = 0; a < arm_rewards.size(); ++a) {
    mdp.reward[a] = arm_rewards[a];
    mdp.reward_noise[a] = noise_halfwidths.empty() ? 0.0 : noise_halfwidths[a];
    mdp.rows[a] = {{1, 1.0}};
    mdp.rows[arm_rewards.size() + a] = {{1, 1.0}};
  }
  mdp.validate();
  return mdp;
}

StationaryPolicy constant_policy(const TabularMDP& mdp, int action) {
  if (action < 0 || action >= mdp.n_actions) fail("constant_policy: action out of range");
  StationaryPolicy pi;
  pi.action.assign(static_cast<std::size_t>(mdp.n_states), action);
  return pi;
}

}  // namespace mdpc
