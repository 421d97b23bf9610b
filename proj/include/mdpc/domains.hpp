#pragma once

#include <array>
#include <span>
#include <vector>

#include "mdpc/mdp.hpp"

namespace mdpc {

// --- Windy corridor ---------------------------------------------------------
//
// A hallway of `width` cells, each fronting a one-cell corridor to the north.
// Hallway cells are windy: the chosen move is replaced by North w.p.
// 0.1 * wind_level. The goal corridor cell absorbs; reaching it through the
// deliberate North move pays goal_reward. The start sits mid-hallway.
struct WindyCorridorSpec {
  int width = 10;
  int start_x = 4;
  double goal_reward = 100.0;
  double gamma = 0.9;
};

TabularMDP windy_corridor(int goal, int wind_level, const WindyCorridorSpec& spec = {});

// All width * 10 (goal, wind) combinations, goal-major.
std::vector<TabularMDP> windy_corridor_family(const WindyCorridorSpec& spec = {});

// --- Surveillance -----------------------------------------------------------
//
// Grid world with v-locations grouped into blocks. A task is an ordered
// target sequence; state = (position, progress). Moves pay -1; surveil pays
// +200 on the correct target, +190 on a block-mate (progress advances in both
// cases), -10 otherwise (progress keeps, episode continues). Completing the
// sequence enters the single absorbing terminal state.
struct SurveillanceLayout {
  int grid = 12;
  std::vector<std::array<int, 2>> v_locations;  // (x, y) per v-location
  std::vector<int> block_of;                    // block id per v-location

  // 12x12 grid, 16 v-locations in 4 blocks of 4 (desk-scale default).
  static SurveillanceLayout scaled12();
  // 48x48 grid, 64 v-locations in 16 blocks of 4.
  static SurveillanceLayout full48();

  int pos_index(int x, int y) const { return y * grid + x; }
  void validate() const;
};

struct SurveillanceRewards {
  double step = -1.0;
  double wrong = -10.0;
  double correct = 200.0;
  double substitute = 190.0;
};

TabularMDP surveillance(const SurveillanceLayout& layout, std::span<const int> targets,
                        double gamma = 0.9, const SurveillanceRewards& rewards = {});

// --- Graph surveillance -----------------------------------------------------
//
// Same dynamics, but substitution acceptability comes from an explicit edge
// set over v-locations instead of blocks.
struct SimilarityGraph {
  int n_locations = 0;
  std::vector<std::pair<int, int>> edges;

  bool adjacent(int a, int b) const;
};

// Hub-and-spoke groups: each group is a center cell plus its four cardinal
// neighbours, with edges hub<->spoke only.
struct GraphSurveillanceLayout {
  SurveillanceLayout base;   // block_of unused for rewards
  SimilarityGraph graph;

  static GraphSurveillanceLayout hub_spoke(int grid, std::span<const std::array<int, 2>> hubs);
};

TabularMDP graph_surveillance(const GraphSurveillanceLayout& layout, std::span<const int> targets,
                              double gamma = 0.9, const SurveillanceRewards& rewards = {});

// --- Synthetic fixtures -----------------------------------------------------

// Single-state MDP with one self-looping action per reward.
TabularMDP synthetic_singleton(std::span<const double> rewards, double gamma = 0.0);

// One decision state whose every action moves to an absorbing terminal with
// reward arm_rewards[a] (+- noise). gamma = 0: each episode is one pull with
// return equal to the realized reward.
TabularMDP bandit_mdp(std::span<const double> arm_rewards, std::span<const double> noise_halfwidths,
                      double r_min, double r_max);

// Constant policy playing `action` everywhere, sized for the given MDP.
StationaryPolicy constant_policy(const TabularMDP& mdp, int action);

}  // namespace mdpc
