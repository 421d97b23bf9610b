#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdpc/solve.hpp"

namespace mdpc {

enum class DistanceKind { dv, dm };

std::string to_string(DistanceKind kind);
DistanceKind distance_kind_from_string(const std::string& s);

// Symmetric pairwise distances over a task library, zero diagonal.
struct DistanceMatrix {
  DistanceKind kind = DistanceKind::dv;
  int n = 0;
  std::vector<double> values;  // row-major n*n

  double at(int i, int j) const {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
  }
  double& at(int i, int j) {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
  }
};

// Policy-based distance: the worse of the two cross regrets when each MDP's
// canonical optimal policy is evaluated in the other, at the initial state.
double d_v(const SolvedTask& a, const SolvedTask& b);
double d_v(const TabularMDP& a, const TabularMDP& b, double tol = 1e-9);

// max over (s,a) of max{|R(s,a)-R'(s,a)|, ||P(.|s,a)-P'(.|s,a)||_1}.
double d_m(const TabularMDP& a, const TabularMDP& b);

// Envelope certifying d_v <= k_m(d_m): eps * (1 + gamma*r_max) / (1-gamma)^2.
double k_m(double eps, double gamma, double r_max);

std::uint64_t library_hash(std::span<const SolvedTask> library, DistanceKind kind);

// Pairwise matrix over a solved library. When cache_dir is given, the matrix
// is loaded from (or saved to) a file keyed by the library content hash.
DistanceMatrix compute_distance_matrix(std::span<const SolvedTask> library, DistanceKind kind,
                                       const std::optional<std::string>& cache_dir = std::nullopt);

// Matrix file: "dmat <kind> <N> <hash>" header, then N lines of N values.
std::string serialize_distance_matrix(const DistanceMatrix& m, std::uint64_t hash);
DistanceMatrix parse_distance_matrix(std::istream& in, std::uint64_t* hash_out = nullptr);
DistanceMatrix load_distance_matrix(const std::string& path, std::uint64_t* hash_out = nullptr);
void save_distance_matrix(const std::string& path, const DistanceMatrix& m, std::uint64_t hash);

}  // namespace mdpc
