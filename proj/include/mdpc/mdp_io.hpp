#pragma once

#include <iosfwd>
#include <string>

#include "mdpc/mdp.hpp"

namespace mdpc {

// Shortest decimal form that round-trips a double exactly.
std::string fmt_double(double v);

// Line-oriented MDP text format:
//   mdp 1
//   n_states N
//   n_actions A
//   gamma G
//   initial_state S0
//   r_min RMIN
//   r_max RMAX
// followed by N*A rows, s-major then a:
//   s a reward noise_halfwidth p(0) p(1) ... p(N-1)
std::string serialize_mdp(const TabularMDP& mdp);
TabularMDP parse_mdp(std::istream& in);
TabularMDP load_mdp(const std::string& path);
void save_mdp(const std::string& path, const TabularMDP& mdp);

// Policy file: "policy 1", "n_states N", then one "s action" line per state.
std::string serialize_policy(const StationaryPolicy& pi);
StationaryPolicy parse_policy(std::istream& in);
StationaryPolicy load_policy(const std::string& path);
void save_policy(const std::string& path, const StationaryPolicy& pi);

// Value file: "value 1", "n_states N", then one "s v" line per state.
std::string serialize_values(const ValueFunction& vf);
ValueFunction parse_values(std::istream& in);
void save_values(const std::string& path, const ValueFunction& vf);

}  // namespace mdpc
