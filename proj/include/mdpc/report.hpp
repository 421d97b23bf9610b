#pragma once

#include <span>
#include <string>
#include <vector>

#include "mdpc/exp3.hpp"

namespace mdpc {

// Per-episode mean/std across a batch of learning records (tasks x trials).
struct CurvePoint {
  long episode = 0;
  int n = 0;
  double raw_mean = 0.0;
  double raw_std = 0.0;
  double cum_mean = 0.0;
  double cum_std = 0.0;
};

std::vector<CurvePoint> aggregate_curves(std::span<const LearningRecord> records);
std::string curves_csv(std::span<const CurvePoint> points);

// Paired clustering-gain table: one row per previous-task count, gains on
// total cumulative reward and on the final-episode return, with-minus-without.
struct GainPair {
  int prev_tasks = 0;
  double with_total_cum = 0.0;
  double without_total_cum = 0.0;
  double with_final = 0.0;
  double without_final = 0.0;
};

struct GainRow {
  int prev_tasks = 0;
  int n_pairs = 0;
  double total_cum_gain_mean = 0.0;
  double total_cum_gain_std = 0.0;
  double final_gain_mean = 0.0;
  double final_gain_std = 0.0;
};

std::vector<GainRow> gain_table(std::span<const GainPair> pairs);
std::string gain_csv(std::span<const GainRow> rows);

}  // namespace mdpc
