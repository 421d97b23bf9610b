#include "mdpc/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "mdpc/mdp_io.hpp"

namespace mdpc {

namespace {

struct Moments {
  long n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  void add(double v) {
    ++n;
    sum += v;
    sum_sq += v * v;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double stddev() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, sum_sq / static_cast<double>(n) - m * m);
    return std::sqrt(var);
  }
};

}  // namespace

std::vector<CurvePoint> aggregate_curves(std::span<const LearningRecord> records) {
  std::size_t horizon = 0;
  for (const auto& r : records) horizon = std::max(horizon, r.rows.size());
  std::vector<Moments> raw(horizon), cum(horizon);
  for (const auto& r : records)
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      raw[i].add(r.rows[i].raw_return);
      cum[i].add(r.rows[i].cumulative);
    }
  std::vector<CurvePoint> out(horizon);
  for (std::size_t i = 0; i < horizon; ++i) {
    out[i].episode = static_cast<long>(i) + 1;
    out[i].n = static_cast<int>(raw[i].n);
    out[i].raw_mean = raw[i].mean();
    out[i].raw_std = raw[i].stddev();
    out[i].cum_mean = cum[i].mean();
    out[i].cum_std = cum[i].stddev();
  }
  return out;
}

std::string curves_csv(std::span<const CurvePoint> points) {
  std::string out = "episode,n,raw_mean,raw_std,cum_mean,cum_std\n";
  for (const auto& p : points) {
    out += std::to_string(p.episode) + "," + std::to_string(p.n) + "," + fmt_double(p.raw_mean) +
           "," + fmt_double(p.raw_std) + "," + fmt_double(p.cum_mean) + "," + fmt_double(p.cum_std) +
           "\n";
  }
  return out;
}

std::vector<GainRow> gain_table(std::span<const GainPair> pairs) {
  std::map<int, std::pair<Moments, Moments>> groups;
  for (const auto& p : pairs) {
    auto& [total, final_] = groups[p.prev_tasks];
    total.add(p.with_total_cum - p.without_total_cum);
    final_.add(p.with_final - p.without_final);
  }
  std::vector<GainRow> out;
  for (const auto& [prev, moments] : groups) {
    GainRow row;
    row.prev_tasks = prev;
    row.n_pairs = static_cast<int>(moments.first.n);
    row.total_cum_gain_mean = moments.first.mean();
    row.total_cum_gain_std = moments.first.stddev();
    row.final_gain_mean = moments.second.mean();
    row.final_gain_std = moments.second.stddev();
    out.push_back(row);
  }
  return out;
}

std::string gain_csv(std::span<const GainRow> rows) {
  std::string out =
      "prev_tasks,n_pairs,total_cum_gain_mean,total_cum_gain_std,final_gain_mean,final_gain_std\n";
  for (const auto& r : rows) {
    out += std::to_string(r.prev_tasks) + "," + std::to_string(r.n_pairs) + "," +
           fmt_double(r.total_cum_gain_mean) + "," + fmt_double(r.total_cum_gain_std) + "," +
           fmt_double(r.final_gain_mean) + "," + fmt_double(r.final_gain_std) + "\n";
  }
  return out;
}

}  // namespace mdpc
