#include "mdpc/distance.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "mdpc/mdp_io.hpp"

namespace mdpc {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error("distance: " + what); }

double cross_value(const SolvedTask& in_task, const StationaryPolicy& pi) {
  const ValueFunction v = evaluate_policy(in_task.mdp, pi);
  return v.v[static_cast<std::size_t>(in_task.mdp.initial_state)];
}

std::uint64_t policy_signature(const StationaryPolicy& pi) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int a : pi.action) {
    h ^= static_cast<std::uint64_t>(a) + 0x9e3779b97f4a7c15ULL;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string to_string(DistanceKind kind) { return kind == DistanceKind::dv ? "dv" : "dm"; }

DistanceKind distance_kind_from_string(const std::string& s) {
  if (s == "dv") return DistanceKind::dv;
  if (s == "dm") return DistanceKind::dm;
  fail("unknown distance kind '" + s + "'");
}

double d_v(const SolvedTask& a, const SolvedTask& b) {
  if (!same_spaces(a.mdp, b.mdp)) throw std::invalid_argument("d_v: mismatched state/action spaces");
  const double regret_in_a = a.v_star_initial() - cross_value(a, b.policy);
  const double regret_in_b = b.v_star_initial() - cross_value(b, a.policy);
  return std::max({regret_in_a, regret_in_b, 0.0});
}

double d_v(const TabularMDP& a, const TabularMDP& b, double tol) {
  if (!same_spaces(a, b)) throw std::invalid_argument("d_v: mismatched state/action spaces");
  return d_v(solve_task(a, tol), solve_task(b, tol));
}

double d_m(const TabularMDP& a, const TabularMDP& b) {
  if (!same_spaces(a, b)) throw std::invalid_argument("d_m: mismatched state/action spaces");
  double worst = 0.0;
  for (int s = 0; s < a.n_states; ++s) {
    for (int act = 0; act < a.n_actions; ++act) {
      const std::size_t idx = a.sa_index(s, act);
      worst = std::max(worst, std::fabs(a.reward[idx] - b.reward[idx]));
      // L1 over sparse rows via merge on the state index
      const TransitionRow& ra = a.rows[idx];
      const TransitionRow& rb = b.rows[idx];
      double l1 = 0.0;
      std::size_t i = 0, j = 0;
      while (i < ra.size() || j < rb.size()) {
        if (j == rb.size() || (i < ra.size() && ra[i].state < rb[j].state)) {
          l1 += std::fabs(ra[i++].prob);
        } else if (i == ra.size() || rb[j].state < ra[i].state) {
          l1 += std::fabs(rb[j++].prob);
        } else {
          l1 += std::fabs(ra[i].prob - rb[j].prob);
          ++i, ++j;
        }
      }
      worst = std::max(worst, l1);
    }
  }
  return worst;
}

double k_m(double eps, double gamma, double r_max) {
  if (eps < 0.0) throw std::invalid_argument("k_m: eps must be non-negative");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("k_m: gamma must lie in [0,1)");
  const double denom = (1.0 - gamma) * (1.0 - gamma);
  return eps * (1.0 + gamma * r_max) / denom;
}

std::uint64_t library_hash(std::span<const SolvedTask> library, DistanceKind kind) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(kind == DistanceKind::dv ? 1u : 2u);
  for (const auto& task : library) mix(content_hash(task.mdp));
  return h;
}

DistanceMatrix compute_distance_matrix(std::span<const SolvedTask> library, DistanceKind kind,
                                       const std::optional<std::string>& cache_dir) {
  const int n = static_cast<int>(library.size());
  const std::uint64_t hash = library_hash(library, kind);
  std::filesystem::path cache_path;
  if (cache_dir) {
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%016llx.dmat", to_string(kind).c_str(),
                  static_cast<unsigned long long>(hash));
    cache_path = std::filesystem::path(*cache_dir) / name;
    if (std::filesystem::exists(cache_path)) {
      std::uint64_t stored = 0;
      DistanceMatrix m = load_distance_matrix(cache_path.string(), &stored);
      if (stored == hash && m.kind == kind && m.n == n) return m;
    }
  }

  DistanceMatrix m;
  m.kind = kind;
  m.n = n;
  m.values.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);

  for (int i = 1; i < n; ++i)
    if (!same_spaces(library[0].mdp, library[static_cast<std::size_t>(i)].mdp))
      throw std::invalid_argument("distance_matrix: library spaces differ");

  if (kind == DistanceKind::dm) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double d = d_m(library[static_cast<std::size_t>(i)].mdp,
                             library[static_cast<std::size_t>(j)].mdp);
        m.at(i, j) = d;
        m.at(j, i) = d;
      }
  } else {
    // cross_values[i] caches V_i^{pi}(s0) per distinct policy; tasks sharing
    // an optimal policy collapse to one linear solve.
    std::vector<std::unordered_map<std::uint64_t, double>> cache(static_cast<std::size_t>(n));
    std::vector<std::uint64_t> sig(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      sig[static_cast<std::size_t>(i)] = policy_signature(library[static_cast<std::size_t>(i)].policy);
    auto value_of = [&](int task, int policy_owner) {
      const std::uint64_t key = sig[static_cast<std::size_t>(policy_owner)];
      auto& slot = cache[static_cast<std::size_t>(task)];
      if (auto it = slot.find(key); it != slot.end()) return it->second;
      const double v = cross_value(library[static_cast<std::size_t>(task)],
                                   library[static_cast<std::size_t>(policy_owner)].policy);
      slot.emplace(key, v);
      return v;
    };
    for (int i = 0; i < n; ++i) {
      cache[static_cast<std::size_t>(i)].emplace(sig[static_cast<std::size_t>(i)],
                                                 library[static_cast<std::size_t>(i)].v_star_initial());
      for (int j = i + 1; j < n; ++j) {
        const double in_i = library[static_cast<std::size_t>(i)].v_star_initial() - value_of(i, j);
        const double in_j = library[static_cast<std::size_t>(j)].v_star_initial() - value_of(j, i);
        const double d = std::max({in_i, in_j, 0.0});
        m.at(i, j) = d;
        m.at(j, i) = d;
      }
    }
  }

  if (cache_dir) {
    std::filesystem::create_directories(*cache_dir);
    save_distance_matrix(cache_path.string(), m, hash);
  }
  return m;
}

std::string serialize_distance_matrix(const DistanceMatrix& m, std::uint64_t hash) {
  char head[96];
  std::snprintf(head, sizeof(head), "dmat %s %d %016llx\n", to_string(m.kind).c_str(), m.n,
                static_cast<unsigned long long>(hash));
  std::string out = head;
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j) {
      if (j) out += ' ';
      out += fmt_double(m.at(i, j));
    }
    out += '\n';
  }
  return out;
}

DistanceMatrix parse_distance_matrix(std::istream& in, std::uint64_t* hash_out) {
  std::string word;
  if (!(in >> word) || word != "dmat") fail("expected 'dmat' header");
  std::string kind;
  int n = 0;
  std::string hash_hex;
  if (!(in >> kind >> n >> hash_hex)) fail("bad matrix header");
  if (n < 0) fail("negative matrix size");
  if (hash_out) *hash_out = std::stoull(hash_hex, nullptr, 16);
  DistanceMatrix m;
  m.kind = distance_kind_from_string(kind);
  m.n = n;
  m.values.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (std::size_t i = 0; i < m.values.size(); ++i)
    if (!(in >> m.values[i])) fail("truncated matrix body");
  return m;
}

DistanceMatrix load_distance_matrix(const std::string& path, std::uint64_t* hash_out) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  return parse_distance_matrix(in, hash_out);
}

void save_distance_matrix(const std::string& path, const DistanceMatrix& m, std::uint64_t hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write " + path);
  out << serialize_distance_matrix(m, hash);
  if (!out) fail("write failed for " + path);
}

}  // namespace mdpc
