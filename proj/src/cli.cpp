#include "mdpc/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "mdpc/experiment.hpp"
#include "mdpc/mdp_io.hpp"
#include "mdpc/policy_reuse.hpp"
#include "mdpc/report.hpp"

namespace mdpc {

namespace {

namespace fs = std::filesystem;

std::vector<SolvedTask> solve_library(const std::vector<std::string>& mdp_files, double tol) {
  std::vector<SolvedTask> library;
  library.reserve(mdp_files.size());
  for (const auto& path : mdp_files) library.push_back(solve_task(load_mdp(path), tol));
  return library;
}

CostParams cost_params_from_options(double delta_r, double r_max, double gamma, long t) {
  CostParams p;
  p.delta_r = delta_r;
  p.r_max = r_max;
  p.gamma = gamma;
  p.t_horizon = t;
  return p;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cli: cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("cli: write failed for " + path);
}

std::string task_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "task_%05d.csv", index);
  return buf;
}

std::string clustering_file_name(int after_task) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "clustering_%05d.txt", after_task);
  return buf;
}

struct ArchiveIndexRow {
  int task_index;
  int prev_tasks;
  int sources_used;
  std::uint64_t seed;
  std::string file;
};

std::vector<ArchiveIndexRow> load_archive_index(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "tasks.csv");
  if (!in) throw std::runtime_error("cli: archive index missing in " + dir);
  std::vector<ArchiveIndexRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ArchiveIndexRow row;
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');
    row.task_index = std::stoi(field);
    std::getline(ss, field, ',');
    row.prev_tasks = std::stoi(field);
    std::getline(ss, field, ',');
    row.sources_used = std::stoi(field);
    std::getline(ss, field, ',');
    row.seed = std::stoull(field);
    std::getline(ss, field, ',');
    row.file = field;
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_solve(const std::string& mdp_file, const std::string& out_policy,
              const std::string& out_values, double tol, std::ostream& out) {
  const SolveResult result = solve_optimal(load_mdp(mdp_file), tol);
  if (!out_policy.empty()) save_policy(out_policy, result.policy);
  if (!out_values.empty()) save_values(out_values, result.values);
  out << "solved iterations=" << result.iterations << " residual=" << fmt_double(result.residual)
      << "\n";
  return 0;
}

int cmd_distances(const std::vector<std::string>& mdp_files, const std::string& kind_name,
                  const std::string& out_file, const std::string& cache_dir, double tol,
                  std::ostream& out) {
  const DistanceKind kind = distance_kind_from_string(kind_name);
  const auto library = solve_library(mdp_files, tol);
  std::optional<std::string> cache;
  if (!cache_dir.empty()) cache = cache_dir;
  const DistanceMatrix m = compute_distance_matrix(library, kind, cache);
  save_distance_matrix(out_file, m, library_hash(library, kind));
  out << "distances kind=" << kind_name << " n=" << m.n << " out=" << out_file << "\n";
  return 0;
}

int cmd_cluster(const std::string& matrix_file, const std::string& cost_name, double delta_r,
                double r_max, double gamma, long t, long tm, int restarts, double theta1,
                double mhav_alpha, double mhav_beta, double alpha_prime, int ladder_n,
                double ladder_base_factor, double ladder_top_factor, std::uint64_t seed,
                const std::string& out_file, const std::string& trace_file, std::ostream& out) {
  const DistanceMatrix dist = load_distance_matrix(matrix_file);
  const CostKind kind = cost_kind_from_string(cost_name);
  const CostParams params = cost_params_from_options(delta_r, r_max, gamma, t);
  SearchParams search;
  search.ladder_rungs = ladder_n;
  search.alpha_prime = alpha_prime;
  search.base_factor = ladder_base_factor;
  search.top_factor = ladder_top_factor;
  search.mhav.alpha = mhav_alpha;
  search.mhav.beta = mhav_beta;
  search.mhav.iterations = tm;
  search.mhav.restarts = restarts;
  search.theta1 = theta1;

  std::ofstream trace_out;
  TraceSink sink;
  if (!trace_file.empty()) {
    trace_out.open(trace_file, std::ios::binary);
    if (!trace_out) throw std::runtime_error("cli: cannot write " + trace_file);
    trace_out << "iteration,restart,lambda,cost,accepted,best_so_far\n";
    sink = [&trace_out](const TraceRow& row) {
      trace_out << row.iteration << ',' << row.restart << ',' << fmt_double(row.lambda) << ','
                << fmt_double(row.cost) << ',' << (row.accepted ? 1 : 0) << ','
                << fmt_double(row.best_so_far) << '\n';
    };
  }

  const SearchResult result = search_clusterings(dist, kind, params, search, seed, sink);
  ClusteringFile file;
  file.clustering = result.best;
  file.summary_kind = dist.kind;
  file.summary = summarize(result.best, dist);
  file.cost = result.best_cost;
  save_clustering(out_file, file);
  out << "cluster cost=" << fmt_double(result.best_cost) << " c=" << result.best.cluster_count()
      << " out=" << out_file << "\n";
  return 0;
}

int cmd_transfer(const std::string& target_file, const std::vector<std::string>& source_files,
                 long t, int l, double delta, double beta, int horizon, double q_alpha,
                 double q_epsilon, double q_decay, std::uint64_t seed, const std::string& out_file,
                 std::ostream& out) {
  const TabularMDP target = load_mdp(target_file);
  std::vector<StationaryPolicy> sources;
  sources.reserve(source_files.size());
  for (const auto& path : source_files) {
    StationaryPolicy pi = load_policy(path);
    if (pi.action.size() != static_cast<std::size_t>(target.n_states))
      throw std::runtime_error("cli: source policy size mismatch: " + path);
    sources.push_back(std::move(pi));
  }
  TransferParams params;
  params.beta = beta;
  params.t_episodes = t;
  params.elimination_interval = l;
  params.delta = delta;
  params.horizon = horizon;
  params.qlearn.alpha = q_alpha;
  params.qlearn.epsilon = q_epsilon;
  params.qlearn.epsilon_decay = q_decay;
  const LearningRecord record = exp3_transfer_run(target, sources, params, seed);
  save_learning_record_csv(out_file, record);
  out << "transfer episodes=" << record.rows.size() << " total="
      << fmt_double(record.total_cumulative()) << " clip_warnings=" << record.clip_warnings
      << " out=" << out_file << "\n";
  return 0;
}

int cmd_continual(const std::string& config_file, std::optional<std::uint64_t> seed_flag,
                  const std::string& out_dir, std::ostream& out) {
  KvConfig cfg = KvConfig::load(config_file);
  if (seed_flag) cfg.set_long("master_seed", static_cast<long>(*seed_flag));
  ContinualSetup setup = continual_setup_from_config(cfg);

  fs::create_directories(out_dir);
  std::string index_csv = "task_index,prev_tasks,sources_used,seed,file\n";
  ArchiveHooks hooks;
  hooks.on_task = [&](const TaskOutcome& outcome) {
    const std::string name = task_file_name(outcome.task_index);
    save_learning_record_csv((fs::path(out_dir) / name).string(), outcome.record);
    index_csv += std::to_string(outcome.task_index) + "," + std::to_string(outcome.prev_tasks) +
                 "," + std::to_string(outcome.sources_used) + "," + std::to_string(outcome.seed) +
                 "," + name + "\n";
  };
  hooks.on_cluster = [&](const ClusterEvent& event) {
    ClusteringFile file;
    file.clustering = event.clustering;
    file.cost = event.cost;
    save_clustering((fs::path(out_dir) / clustering_file_name(event.after_task)).string(), file);
  };

  const ContinualResult result =
      continual_transfer(setup.stream, setup.n_tasks, setup.params, setup.master_seed, hooks);

  write_text((fs::path(out_dir) / "tasks.csv").string(), index_csv);
  cfg.set("archive_format", "1");
  write_text((fs::path(out_dir) / "manifest.txt").string(), cfg.serialize());
  out << "continual tasks=" << result.outcomes.size() << " clusterings=" << result.events.size()
      << " out=" << out_dir << "\n";
  return 0;
}

int cmd_oracle(const std::vector<std::string>& mdp_files, const std::string& matrix_file,
               const std::string& cost_name, double delta_r, double r_max, double gamma, long t,
               double tol, const std::string& out_file, std::ostream& out) {
  DistanceMatrix dist;
  if (!matrix_file.empty()) {
    dist = load_distance_matrix(matrix_file);
  } else {
    if (mdp_files.empty()) throw std::runtime_error("cli: oracle needs MDP files or --matrix");
    const auto library = solve_library(mdp_files, tol);
    dist = compute_distance_matrix(library, DistanceKind::dv);
  }
  const CostKind kind = cost_kind_from_string(cost_name);
  const CostParams params = cost_params_from_options(delta_r, r_max, gamma, t);
  if (dist.n > 10) throw std::runtime_error("cli: oracle refuses n > 10");

  Clustering best = Clustering::one_cluster(dist.n);
  double best_cost = std::numeric_limits<double>::infinity();
  long count = 0;
  for_each_partition(dist.n, [&](const Clustering& a) {
    const double cost = clustering_cost(kind, a, dist, params);
    ++count;
    out << "partition";
    for (int task = 0; task < a.n_tasks(); ++task) out << ' ' << a.cluster_of(task);
    out << " cost " << fmt_double(cost) << "\n";
    if (cost < best_cost) {
      best_cost = cost;
      best = a;
    }
  });
  out << "partitions " << count << "\n";
  out << "best";
  for (int task = 0; task < best.n_tasks(); ++task) out << ' ' << best.cluster_of(task);
  out << " cost " << fmt_double(best_cost) << "\n";

  if (!out_file.empty()) {
    ClusteringFile file;
    file.clustering = best;
    file.summary_kind = dist.kind;
    file.summary = summarize(best, dist);
    file.cost = best_cost;
    save_clustering(out_file, file);
  }
  return 0;
}

int cmd_report(const std::string& archive_dir, const std::string& out_file,
               const std::string& baseline_dir, const std::string& gain_out, std::ostream& out) {
  const auto index = load_archive_index(archive_dir);
  std::vector<LearningRecord> records;
  records.reserve(index.size());
  for (const auto& row : index)
    records.push_back(load_learning_record_csv((fs::path(archive_dir) / row.file).string()));
  const auto curves = aggregate_curves(records);
  write_text(out_file, curves_csv(curves));
  out << "report records=" << records.size() << " out=" << out_file << "\n";

  if (!baseline_dir.empty()) {
    if (gain_out.empty()) throw std::runtime_error("cli: --baseline needs --gain-out");
    const auto base_index = load_archive_index(baseline_dir);
    if (base_index.size() != index.size())
      throw std::runtime_error("cli: unpaired archives (task counts differ)");
    std::vector<GainPair> pairs;
    for (std::size_t i = 0; i < index.size(); ++i) {
      if (index[i].task_index != base_index[i].task_index)
        throw std::runtime_error("cli: unpaired archives (task indices differ)");
      const LearningRecord base =
          load_learning_record_csv((fs::path(baseline_dir) / base_index[i].file).string());
      GainPair pair;
      pair.prev_tasks = index[i].prev_tasks;
      pair.with_total_cum = records[i].total_cumulative();
      pair.without_total_cum = base.total_cumulative();
      pair.with_final = records[i].final_return();
      pair.without_final = base.final_return();
      pairs.push_back(pair);
    }
    const auto table = gain_table(pairs);
    write_text(gain_out, gain_csv(table));
    out << "gain groups=" << table.size() << " out=" << gain_out << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"tabular MDP clustering and policy-reuse transfer toolkit"};
  app.require_subcommand(1);

  // solve
  std::string mdp_file, out_policy, out_values;
  double tol = 1e-9;
  auto* solve = app.add_subcommand("solve", "solve one MDP file exactly");
  solve->add_option("--mdp", mdp_file, "MDP file")->required();
  solve->add_option("--out-policy", out_policy, "policy output file");
  solve->add_option("--out-values", out_values, "value output file");
  solve->add_option("--tol", tol, "Bellman residual tolerance");

  // distances
  std::vector<std::string> library_files;
  std::string kind_name = "dv", matrix_out, cache_dir;
  auto* distances = app.add_subcommand("distances", "pairwise distance matrix over a library");
  distances->add_option("mdps", library_files, "MDP files, library order")->required();
  distances->add_option("--kind", kind_name, "dv or dm");
  distances->add_option("--out", matrix_out, "matrix output file")->required();
  distances->add_option("--cache-dir", cache_dir, "matrix cache directory");
  distances->add_option("--tol", tol, "solver tolerance");

  // cluster
  std::string matrix_file, cost_name = "cost2", clustering_out, trace_file;
  double delta_r = 1.0, r_max = 1.0, gamma = 0.9, theta1 = 1.0;
  double mhav_alpha = 0.1, mhav_beta = 0.8, alpha_prime = 0.5;
  double ladder_base_factor = 20.0, ladder_top_factor = 80.0;
  long t_horizon = 10000, tm = 100000;
  int restarts = 20, ladder_n = 40;
  std::uint64_t seed = 1;
  auto* cluster = app.add_subcommand("cluster", "search clusterings over a distance matrix");
  cluster->add_option("--matrix", matrix_file, "distance matrix file")->required();
  cluster->add_option("--cost", cost_name, "cost1, cost2 or cost2m");
  cluster->add_option("--delta-r", delta_r, "reward range");
  cluster->add_option("--r-max", r_max, "reward upper bound");
  cluster->add_option("--gamma", gamma, "discount");
  cluster->add_option("--T", t_horizon, "transfer episode budget in g(c)");
  cluster->add_option("--tm", tm, "MHAV iterations per restart");
  cluster->add_option("--restarts", restarts, "MHAV restarts");
  cluster->add_option("--theta1", theta1, "kernel geometric parameter");
  cluster->add_option("--mhav-alpha", mhav_alpha, "lambda-move probability");
  cluster->add_option("--mhav-beta", mhav_beta, "point-move probability");
  cluster->add_option("--alpha-prime", alpha_prime, "ladder up probability");
  cluster->add_option("--ladder-n", ladder_n, "ladder size");
  cluster->add_option("--ladder-base-factor", ladder_base_factor,
                      "bottom-rung pressure in units of g(2)-g(1)");
  cluster->add_option("--ladder-top-factor", ladder_top_factor,
                      "top-rung pressure in units of g(2)-g(1)");
  cluster->add_option("--seed", seed, "search seed");
  cluster->add_option("--out", clustering_out, "clustering output file")->required();
  cluster->add_option("--trace", trace_file, "MHAV trace CSV");

  // transfer
  std::string target_file, record_out;
  std::vector<std::string> source_files;
  long t_episodes = 10000;
  int l_interval = 50, horizon = 200;
  double delta = 0.1, beta = 0.0;
  double q_alpha = 0.5, q_epsilon = 0.2, q_decay = 0.999;
  auto* transfer = app.add_subcommand("transfer", "EXP-3 transfer on one target task");
  transfer->add_option("--target", target_file, "target MDP file")->required();
  transfer->add_option("--source", source_files, "source policy files");
  transfer->add_option("--T", t_episodes, "episodes");
  transfer->add_option("--l", l_interval, "elimination check interval");
  transfer->add_option("--delta", delta, "elimination confidence");
  transfer->add_option("--beta", beta, "mixing rate (0 = auto schedule)");
  transfer->add_option("--horizon", horizon, "episode step cap");
  transfer->add_option("--q-alpha", q_alpha, "Q-learning rate");
  transfer->add_option("--q-epsilon", q_epsilon, "initial exploration");
  transfer->add_option("--q-decay", q_decay, "exploration decay per episode");
  transfer->add_option("--seed", seed, "run seed");
  transfer->add_option("--out", record_out, "learning record CSV")->required();

  // continual
  std::string config_file, out_dir;
  std::optional<std::uint64_t> seed_flag;
  std::uint64_t seed_value = 0;
  auto* continual = app.add_subcommand("continual", "continual transfer over a task stream");
  continual->add_option("--config", config_file, "stream config file")->required();
  auto* seed_opt = continual->add_option("--seed", seed_value, "master seed override");
  continual->add_option("--out", out_dir, "archive directory")->required();

  // oracle
  std::vector<std::string> oracle_files;
  std::string oracle_matrix, oracle_out;
  auto* oracle = app.add_subcommand("oracle", "brute-force clustering on a small library");
  oracle->add_option("mdps", oracle_files, "MDP files (alternative to --matrix)");
  oracle->add_option("--matrix", oracle_matrix, "distance matrix file");
  oracle->add_option("--cost", cost_name, "cost1, cost2 or cost2m");
  oracle->add_option("--delta-r", delta_r, "reward range");
  oracle->add_option("--r-max", r_max, "reward upper bound");
  oracle->add_option("--gamma", gamma, "discount");
  oracle->add_option("--T", t_horizon, "transfer episode budget in g(c)");
  oracle->add_option("--tol", tol, "solver tolerance");
  oracle->add_option("--out", oracle_out, "write the best clustering here");

  // report
  std::string archive_dir, report_out, baseline_dir, gain_out;
  auto* report = app.add_subcommand("report", "aggregate an archive into curves (and gains)");
  report->add_option("--archive", archive_dir, "archive directory")->required();
  report->add_option("--out", report_out, "curves CSV")->required();
  report->add_option("--baseline", baseline_dir, "paired baseline archive");
  report->add_option("--gain-out", gain_out, "gain table CSV");

  std::vector<std::string> args = argv;
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*solve) return cmd_solve(mdp_file, out_policy, out_values, tol, out);
    if (*distances) return cmd_distances(library_files, kind_name, matrix_out, cache_dir, tol, out);
    if (*cluster)
      return cmd_cluster(matrix_file, cost_name, delta_r, r_max, gamma, t_horizon, tm, restarts,
                         theta1, mhav_alpha, mhav_beta, alpha_prime, ladder_n, ladder_base_factor,
                         ladder_top_factor, seed, clustering_out, trace_file, out);
    if (*transfer)
      return cmd_transfer(target_file, source_files, t_episodes, l_interval, delta, beta, horizon,
                          q_alpha, q_epsilon, q_decay, seed, record_out, out);
    if (*continual) {
      if (seed_opt->count() > 0) seed_flag = seed_value;
      return cmd_continual(config_file, seed_flag, out_dir, out);
    }
    if (*oracle)
      return cmd_oracle(oracle_files, oracle_matrix, cost_name, delta_r, r_max, gamma, t_horizon,
                        tol, oracle_out, out);
    if (*report) return cmd_report(archive_dir, report_out, baseline_dir, gain_out, out);
  } catch (const std::invalid_argument& e) {
    err << "error: invalid: " << e.what() << "\n";
    return 1;
  } catch (const SolverError& e) {
    err << "error: solver: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: runtime: " << e.what() << "\n";
    return 1;
  }
  err << "error: usage: no subcommand\n";
  return 2;
}

}  // namespace mdpc
