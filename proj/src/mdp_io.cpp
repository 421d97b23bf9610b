#include "mdpc/mdp_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mdpc {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error("mdp_io: " + what); }

void expect_word(std::istream& in, const std::string& want) {
  std::string got;
  if (!(in >> got) || got != want) fail("expected '" + want + "'");
}

template <typename T>
T read_field(std::istream& in, const std::string& name) {
  expect_word(in, name);
  T v{};
  if (!(in >> v)) fail("bad value for " + name);
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  return in;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write " + path);
  out << text;
  if (!out) fail("write failed for " + path);
}

}  // namespace

std::string fmt_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

std::string serialize_mdp(const TabularMDP& mdp) {
  std::string out;
  out += "mdp 1\n";
  out += "n_states " + std::to_string(mdp.n_states) + "\n";
  out += "n_actions " + std::to_string(mdp.n_actions) + "\n";
  out += "gamma " + fmt_double(mdp.gamma) + "\n";
  out += "initial_state " + std::to_string(mdp.initial_state) + "\n";
  out += "r_min " + fmt_double(mdp.r_min) + "\n";
  out += "r_max " + fmt_double(mdp.r_max) + "\n";
  std::vector<double> dense(static_cast<std::size_t>(mdp.n_states));
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < mdp.n_actions; ++a) {
      const std::size_t idx = mdp.sa_index(s, a);
      out += std::to_string(s) + " " + std::to_string(a) + " " + fmt_double(mdp.reward[idx]) +
             " " + fmt_double(mdp.reward_noise.empty() ? 0.0 : mdp.reward_noise[idx]);
      std::fill(dense.begin(), dense.end(), 0.0);
      for (const auto& e : mdp.rows[idx]) dense[static_cast<std::size_t>(e.state)] = e.prob;
      for (double p : dense) {
        out += ' ';
        out += fmt_double(p);
      }
      out += '\n';
    }
  }
  return out;
}

TabularMDP parse_mdp(std::istream& in) {
  expect_word(in, "mdp");
  int version = 0;
  if (!(in >> version) || version != 1) fail("unsupported format version");
  TabularMDP mdp;
  mdp.n_states = read_field<int>(in, "n_states");
  mdp.n_actions = read_field<int>(in, "n_actions");
  mdp.gamma = read_field<double>(in, "gamma");
  mdp.initial_state = read_field<int>(in, "initial_state");
  mdp.r_min = read_field<double>(in, "r_min");
  mdp.r_max = read_field<double>(in, "r_max");
  if (mdp.n_states <= 0 || mdp.n_actions <= 0) fail("invalid dimensions");
  const std::size_t n_sa = static_cast<std::size_t>(mdp.n_states) * static_cast<std::size_t>(mdp.n_actions);
  mdp.reward.assign(n_sa, 0.0);
  mdp.reward_noise.assign(n_sa, 0.0);
  mdp.rows.assign(n_sa, {});
  for (std::size_t line = 0; line < n_sa; ++line) {
    int s = 0, a = 0;
    if (!(in >> s >> a)) fail("truncated row table");
    if (s < 0 || s >= mdp.n_states || a < 0 || a >= mdp.n_actions) fail("row index out of range");
    const std::size_t idx = mdp.sa_index(s, a);
    if (!(in >> mdp.reward[idx] >> mdp.reward_noise[idx])) fail("bad reward entry");
    TransitionRow row;
    for (int t = 0; t < mdp.n_states; ++t) {
      double p = 0.0;
      if (!(in >> p)) fail("truncated probability row");
      if (p != 0.0) row.push_back({t, p});
    }
    mdp.rows[idx] = std::move(row);
  }
  mdp.validate();
  return mdp;
}

TabularMDP load_mdp(const std::string& path) {
  auto in = open_input(path);
  return parse_mdp(in);
}

void save_mdp(const std::string& path, const TabularMDP& mdp) {
  write_file(path, serialize_mdp(mdp));
}

std::string serialize_policy(const StationaryPolicy& pi) {
  std::string out = "policy 1\nn_states " + std::to_string(pi.action.size()) + "\n";
  for (std::size_t s = 0; s < pi.action.size(); ++s)
    out += std::to_string(s) + " " + std::to_string(pi.action[s]) + "\n";
  return out;
}

StationaryPolicy parse_policy(std::istream& in) {
  expect_word(in, "policy");
  int version = 0;
  if (!(in >> version) || version != 1) fail("unsupported policy version");
  const int n = read_field<int>(in, "n_states");
  if (n <= 0) fail("invalid policy size");
  StationaryPolicy pi;
  pi.action.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    int s = 0, a = 0;
    if (!(in >> s >> a)) fail("truncated policy");
    if (s < 0 || s >= n) fail("policy state out of range");
    pi.action[static_cast<std::size_t>(s)] = a;
  }
  return pi;
}

StationaryPolicy load_policy(const std::string& path) {
  auto in = open_input(path);
  return parse_policy(in);
}

void save_policy(const std::string& path, const StationaryPolicy& pi) {
  write_file(path, serialize_policy(pi));
}

std::string serialize_values(const ValueFunction& vf) {
  std::string out = "value 1\nn_states " + std::to_string(vf.v.size()) + "\n";
  for (std::size_t s = 0; s < vf.v.size(); ++s)
    out += std::to_string(s) + " " + fmt_double(vf.v[s]) + "\n";
  return out;
}

ValueFunction parse_values(std::istream& in) {
  expect_word(in, "value");
  int version = 0;
  if (!(in >> version) || version != 1) fail("unsupported value version");
  const int n = read_field<int>(in, "n_states");
  if (n <= 0) fail("invalid value size");
  ValueFunction vf;
  vf.v.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    int s = 0;
    double v = 0.0;
    if (!(in >> s >> v)) fail("truncated value table");
    if (s < 0 || s >= n) fail("value state out of range");
    vf.v[static_cast<std::size_t>(s)] = v;
  }
  return vf;
}

void save_values(const std::string& path, const ValueFunction& vf) {
  write_file(path, serialize_values(vf));
}

}  // namespace mdpc
