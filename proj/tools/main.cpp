#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matchmkt/errors.hpp"
#include "matchmkt/experiments.hpp"
#include "matchmkt/matching.hpp"
#include "matchmkt/oracle.hpp"
#include "matchmkt/scenario_io.hpp"
#include "matchmkt/signaling.hpp"
#include "matchmkt/treealg.hpp"

namespace {

using namespace matchmkt;

struct SharedFlags {
  std::string config_path;
  std::string output_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> threads;
  std::optional<int> n_applicants;
  std::optional<int> n_firms;
  std::optional<int> d;
  std::optional<std::string> mechanism;
  std::optional<std::string> dist_pre;
  std::optional<std::string> dist_post;
  std::optional<std::string> tiers;
  std::optional<double> epsilon;
  bool timings = false;
};

void add_shared_flags(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--config", f.config_path, "Scenario JSON file");
  cmd->add_option("--output", f.output_path,
                  "Output path (default: standard output)");
  cmd->add_option("--seed", f.seed, "Base seed");
  cmd->add_option("--trials", f.trials, "Trials per sweep point");
  cmd->add_option("--threads", f.threads,
                  "Worker threads (env MATCHLAB_THREADS as fallback)");
  cmd->add_option("--n-applicants", f.n_applicants, "Number of applicants");
  cmd->add_option("--n-firms", f.n_firms, "Number of firms");
  cmd->add_option("--d", f.d, "Signals per agent");
  cmd->add_option("--mechanism", f.mechanism,
                  "applicant|firm|both|multitier|restricted");
  cmd->add_option("--dist-pre", f.dist_pre,
                  "Pre-interview score distribution, e.g. normal:0,1");
  cmd->add_option("--dist-post", f.dist_post,
                  "Post-interview score distribution, e.g. uniform:-1,1");
  cmd->add_option("--tiers", f.tiers,
                  "Tier fractions \"a1,a2,..;b1,b2,..\"");
  cmd->add_option("--epsilon", f.epsilon, "Almost-stability threshold");
  cmd->add_flag("--timings", f.timings,
                "Record real per-trial wall clock in runtime_ms");
}

int env_threads_fallback() {
  if (const char* env = std::getenv("MATCHLAB_THREADS")) {
    int k = std::atoi(env);
    if (k >= 1) return k;
  }
  return 1;
}

ScenarioConfig build_config(const SharedFlags& f) {
  ScenarioConfig cfg;
  cfg.threads = env_threads_fallback();
  if (!f.config_path.empty()) cfg = load_scenario(f.config_path);
  if (f.seed) cfg.base.seed = *f.seed;
  if (f.trials) cfg.trials = *f.trials;
  if (f.threads) cfg.threads = *f.threads;
  if (f.n_applicants) cfg.base.n_applicants = *f.n_applicants;
  if (f.n_firms) cfg.base.n_firms = *f.n_firms;
  if (f.d) cfg.mechanism.d = *f.d;
  if (f.mechanism) cfg.mechanism = parse_mechanism(*f.mechanism, cfg.mechanism.d);
  if (f.dist_pre) cfg.base.pre_dist = parse_distribution(*f.dist_pre);
  if (f.dist_post) cfg.base.post_dist = parse_distribution(*f.dist_post);
  if (f.tiers) cfg.base.tiers = parse_tiers(*f.tiers);
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  if (f.timings) cfg.record_timings = true;
  if (!f.output_path.empty()) cfg.output_path = f.output_path;
  return cfg;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << text;
}

int run_records(const ScenarioConfig& cfg) {
  auto records = run_scenario(cfg);
  for (const auto& r : records)
    if (!r.error.empty())
      std::cerr << "trial " << r.trial << " failed: " << r.error << "\n";
  std::ostringstream csv;
  write_csv(records, csv);
  emit(cfg.output_path, csv.str());
  return 0;
}

int cmd_simulate(const SharedFlags& f) {
  auto cfg = build_config(f);
  return run_records(cfg);
}

int cmd_sweep(const SharedFlags& f, const std::string& param,
              const std::string& values_csv) {
  auto cfg = build_config(f);
  if (!param.empty()) {
    cfg.sweep.parameter = param;
    cfg.sweep.values.clear();
    std::stringstream ss(values_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        cfg.sweep.values.push_back(std::stol(tok));
      } catch (const std::exception&) {
        throw ConfigError("bad sweep value: " + tok);
      }
    }
  }
  if (cfg.sweep.parameter.empty())
    throw ConfigError("sweep needs --param/--values or a sweep in --config");
  return run_records(cfg);
}

int cmd_inspect(const SharedFlags& f) {
  auto cfg = build_config(f);
  MarketConfig mc = cfg.base;
  MarketInstance inst(mc);
  auto graph = build_interview_graph(inst, cfg.mechanism);
  auto matching = deferred_acceptance(inst, graph, cfg.proposing);
  BlockingScanOptions opts;
  opts.include_unmatched_unmatched = cfg.include_unmatched_unmatched;
  auto report = interim_blocking_report(inst, graph, matching, opts);
  auto witness = almost_stable_witness(inst, graph);

  std::ostringstream out;
  out << "n_applicants: " << graph.n_applicants() << "\n"
      << "n_firms: " << graph.n_firms() << "\n"
      << "mechanism: " << cfg.mechanism.tag() << "\n"
      << "d: " << cfg.mechanism.d << "\n"
      << "edges: " << graph.edge_count() << "\n";
  int matched = 0;
  for (int a = 0; a < graph.n_applicants(); ++a)
    matched += matching.matched(a) ? 1 : 0;
  out << "matched_pairs: " << matched << "\n"
      << "blocking_pairs: " << report.pairs.size() << "\n"
      << "applicants_blocked: " << report.applicants_blocked << "\n"
      << "firms_blocked: " << report.firms_blocked << "\n"
      << "perfect_interim_stable: "
      << (is_perfect_interim_stable(report) ? "true" : "false") << "\n"
      << "witness_size: " << witness.witness.size() << "\n"
      << "witness_verified: " << (witness.verified ? "true" : "false") << "\n"
      << "almost_stable_at_epsilon: "
      << (witness.verified &&
                  static_cast<double>(witness.witness.size()) <=
                      cfg.epsilon * graph.n_applicants()
              ? "true"
              : "false")
      << "\n";
  emit(cfg.output_path, out.str());
  return 0;
}

int cmd_tree_mp(int degree, int depth, const std::string& output) {
  if (degree < 2) throw ConfigError("tree-mp requires --degree >= 2");
  if (depth < 1) throw ConfigError("tree-mp requires --depth >= 1");

  // Regular tree: the root has `degree` children, every other internal
  // node degree-1 children, down to the given depth.
  std::vector<std::vector<int>> shape(1);
  std::vector<int> frontier{0};
  for (int level = 1; level <= depth; ++level) {
    std::vector<int> next_frontier;
    for (int node : frontier) {
      int kids = level == 1 ? degree : degree - 1;
      for (int c = 0; c < kids; ++c) {
        int id = static_cast<int>(shape.size());
        shape.emplace_back();
        shape[static_cast<std::size_t>(node)].push_back(id);
        next_frontier.push_back(id);
      }
    }
    frontier = std::move(next_frontier);
  }
  auto mu = marginal_proposal_probabilities(shape, 0);

  std::ostringstream out;
  out << "nodes: " << shape.size() << "\n";
  char buf[64];
  double depth1 = mu[1];
  std::snprintf(buf, sizeof(buf), "%.12f", depth1);
  out << "mu_depth1: " << buf << "\n";
  double iter = 1.0;
  for (int k = 0; k < depth - 1; ++k)
    iter = f_d(static_cast<double>(degree - 1), iter);
  std::snprintf(buf, sizeof(buf), "%.12f", iter);
  out << "f_iterate: " << buf << "\n";
  emit(output, out.str());
  return 0;
}

int cmd_fixed_point(double a, double b, std::optional<double> eps,
                    const std::string& output) {
  auto r = fixed_point(a, b, eps);
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", r.x_star);
  out << "x_star: " << buf << "\n"
      << "regime: " << r.regime << "\n";
  if (r.asymptotic_x_star) {
    std::snprintf(buf, sizeof(buf), "%.6f", *r.asymptotic_x_star);
    out << "asymptotic_x_star: " << buf << "\n";
  }
  if (r.gamma_epsilon) {
    std::snprintf(buf, sizeof(buf), "%.6f", *r.gamma_epsilon);
    out << "gamma_epsilon: " << buf << "\n";
  }
  emit(output, out.str());
  return 0;
}

int cmd_oracle_check(int instances, int max_agents, std::uint64_t seed,
                     const std::string& output) {
  if (max_agents < 2 || max_agents > 12)
    throw ConfigError("--max-agents must be in [2,12]");
  if (instances < 1) throw ConfigError("--instances must be >= 1");

  int checked = 0, failures = 0;
  std::ostringstream out;
  for (int k = 0; k < instances; ++k) {
    Stream pick(seed, StreamRole::Internal, static_cast<std::uint64_t>(k), 0);
    int na = 1 + static_cast<int>(pick.next_u64() %
                                  static_cast<std::uint64_t>(max_agents - 1));
    int nj_cap = max_agents - na;
    int nj = 1 + static_cast<int>(pick.next_u64() %
                                  static_cast<std::uint64_t>(nj_cap));
    MarketConfig mc;
    mc.n_applicants = na;
    mc.n_firms = nj;
    mc.seed = trial_seed(seed, 0, k);
    MarketInstance inst(mc);
    Mechanism mech = parse_mechanism("applicant", 1 + static_cast<int>(
                                                      pick.next_u64() %
                                                      static_cast<std::uint64_t>(nj)));
    auto graph = build_interview_graph(inst, mech);
    auto set = enumerate_stable_matchings(inst, graph);
    ++checked;

    bool ok = !set.matchings.empty() &&
              rural_hospital_check(inst, graph, set);
    auto da_a = deferred_acceptance(inst, graph, Side::Applicant);
    auto da_f = deferred_acceptance(inst, graph, Side::Firm);
    ok = ok && verify_stable(inst, graph, da_a).empty() &&
         verify_stable(inst, graph, da_f).empty();
    for (int a = 0; ok && a < graph.n_applicants(); ++a)
      for (int fv : graph.neighbors(a)) {
        if (available(inst, graph, fv, a) !=
                available_bruteforce(inst, graph, fv, a) ||
            available(inst, graph, a, fv) !=
                available_bruteforce(inst, graph, a, fv)) {
          ok = false;
          break;
        }
      }
    if (!ok) {
      ++failures;
      out << "instance " << k << ": FAIL (n_a=" << na << ", n_j=" << nj
          << ")\n";
    }
  }
  out << "checked: " << checked << "\n"
      << "failures: " << failures << "\n"
      << "result: " << (failures == 0 ? "pass" : "fail") << "\n";
  emit(output, out.str());
  if (failures != 0) throw ContractError("oracle cross-check failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random matching markets with interview signaling"};
  app.require_subcommand(1);

  SharedFlags sim_flags, sweep_flags, inspect_flags;
  std::string sweep_param, sweep_values;

  auto* simulate =
      app.add_subcommand("simulate", "Run a scenario and write trial CSV");
  add_shared_flags(simulate, sim_flags);

  auto* sweep =
      app.add_subcommand("sweep", "Run trials across a parameter sweep");
  add_shared_flags(sweep, sweep_flags);
  sweep->add_option("--param", sweep_param,
                    "Swept parameter: d, n_applicants or n_firms");
  sweep->add_option("--values", sweep_values,
                    "Comma-separated sweep values");

  auto* inspect =
      app.add_subcommand("inspect", "Summarize a single sampled instance");
  add_shared_flags(inspect, inspect_flags);

  auto* tree_mp = app.add_subcommand(
      "tree-mp", "Exact proposal marginals on a regular tree");
  int degree = 2, depth = 1;
  std::string tree_output;
  tree_mp->add_option("--degree", degree, "Uniform degree d")->required();
  tree_mp->add_option("--depth", depth, "Tree depth m")->required();
  tree_mp->add_option("--output", tree_output, "Output path");

  auto* fixed =
      app.add_subcommand("fixed-point", "Fixed point of f_a composed f_b");
  double fp_a = 1.0, fp_b = 1.0;
  std::optional<double> fp_eps;
  std::string fp_output;
  fixed->add_option("--a", fp_a, "Outer degree parameter a")->required();
  fixed->add_option("--b", fp_b, "Inner degree parameter b")->required();
  fixed->add_option("--epsilon", fp_eps, "Contraction tolerance");
  fixed->add_option("--output", fp_output, "Output path");

  auto* oracle = app.add_subcommand(
      "oracle-check", "Cross-check fast paths against brute force");
  int oc_instances = 100, oc_max_agents = 6;
  std::uint64_t oc_seed = 0;
  std::string oc_output;
  oracle->add_option("--instances", oc_instances, "Instances to test");
  oracle->add_option("--max-agents", oc_max_agents,
                     "Max total agents per instance (<= 12)");
  oracle->add_option("--seed", oc_seed, "Battery seed");
  oracle->add_option("--output", oc_output, "Output path");

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) return cmd_simulate(sim_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_param,
                                          sweep_values);
    if (inspect->parsed()) return cmd_inspect(inspect_flags);
    if (tree_mp->parsed()) return cmd_tree_mp(degree, depth, tree_output);
    if (fixed->parsed()) return cmd_fixed_point(fp_a, fp_b, fp_eps, fp_output);
    if (oracle->parsed())
      return cmd_oracle_check(oc_instances, oc_max_agents, oc_seed, oc_output);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
