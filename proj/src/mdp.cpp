#include "mdpc/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mdpc/mdp_io.hpp"

namespace mdpc {

namespace {
constexpr double kRowSumTol = 1e-9;

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument("mdp: " + what); }
}  // namespace

double TabularMDP::value_bound() const {
  return std::max(std::fabs(r_min), std::fabs(r_max)) / (1.0 - gamma);
}

void TabularMDP::validate() {
  if (n_states <= 0) fail("n_states must be positive");
  if (n_actions <= 0) fail("n_actions must be positive");
  if (!(gamma >= 0.0 && gamma < 1.0)) fail("gamma must lie in [0,1)");
  if (initial_state < 0 || initial_state >= n_states) fail("initial_state out of range");
  if (!(r_min <= r_max)) fail("r_min must not exceed r_max");
  const std::size_t n_sa = static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_actions);
  if (reward.size() != n_sa) fail("reward table size mismatch");
  if (reward_noise.empty()) reward_noise.assign(n_sa, 0.0);
  if (reward_noise.size() != n_sa) fail("reward_noise table size mismatch");
  if (rows.size() != n_sa) fail("transition table size mismatch");

  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      const std::size_t idx = sa_index(s, a);
      const double w = reward_noise[idx];
      if (w < 0.0) fail("reward noise half-width must be non-negative");
      if (reward[idx] - w < r_min - kRowSumTol || reward[idx] + w > r_max + kRowSumTol)
        fail("realizable reward outside [r_min, r_max] at (s=" + std::to_string(s) +
             ", a=" + std::to_string(a) + ")");
      double sum = 0.0;
      int prev = -1;
      for (const auto& e : rows[idx]) {
        if (e.state < 0 || e.state >= n_states) fail("transition target out of range");
        if (e.state <= prev) fail("transition row not sorted by state");
        if (e.prob < 0.0) fail("negative transition probability");
        prev = e.state;
        sum += e.prob;
      }
      if (std::fabs(sum - 1.0) > kRowSumTol)
        fail("transition row does not sum to 1 at (s=" + std::to_string(s) +
             ", a=" + std::to_string(a) + ")");
    }
  }

  absorbing_.assign(static_cast<std::size_t>(n_states), 0);
  for (int s = 0; s < n_states; ++s) {
    bool absorbing = true;
    for (int a = 0; a < n_actions && absorbing; ++a) {
      const std::size_t idx = sa_index(s, a);
      const auto& r = rows[idx];
      absorbing = r.size() == 1 && r[0].state == s && reward[idx] == 0.0 && reward_noise[idx] == 0.0;
    }
    absorbing_[static_cast<std::size_t>(s)] = absorbing ? 1 : 0;
  }
}

bool same_spaces(const TabularMDP& a, const TabularMDP& b) {
  return a.n_states == b.n_states && a.n_actions == b.n_actions;
}

std::uint64_t content_hash(const TabularMDP& mdp) {
  const std::string text = serialize_mdp(mdp);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace mdpc
