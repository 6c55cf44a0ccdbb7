// Copyright 2026 the rnfv authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rnfv/auxnet.hpp"
#include "rnfv/errors.hpp"
#include "rnfv/experiment.hpp"
#include "rnfv/facloc.hpp"
#include "rnfv/metrics.hpp"
#include "rnfv/milp.hpp"
#include "rnfv/netmodel.hpp"
#include "rnfv/pathfind.hpp"

namespace {

using namespace rnfv;

std::string num12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Scenario need_scenario(const std::string& path) {
  if (path.empty())
    throw ValidationError("this subcommand needs --scenario <file>");
  return load_scenario_file(path);
}

std::string id_sequence(const Scenario& s, const std::vector<int>& walk) {
  std::string out;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    if (i) out += '-';
    out += s.network.node(walk[i]).id;
  }
  return out;
}

// Lines of whitespace-separated node ids, one walk per demand in demand
// order; # starts a comment.
std::vector<std::vector<std::vector<int>>> read_routing(const Scenario& s,
                                                        const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw ValidationError("cannot read routing file " + path);
  std::vector<std::vector<std::vector<int>>> pinned;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<int> walk;
    std::string id;
    while (ls >> id) {
      int v = s.network.index_of(id);
      if (v < 0) throw ValidationError("routing file names unknown node " + id);
      walk.push_back(v);
    }
    if (!walk.empty()) pinned.push_back({walk});
  }
  if (pinned.size() != s.demands.size())
    throw ValidationError("routing file must give one walk per demand");
  return pinned;
}

// Lines of `nf node-id [node-id ...]`; # starts a comment.
Deployment read_deployment(const Scenario& s, const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw ValidationError("cannot read deployment file " + path);
  Deployment dep;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string nf;
    if (!(ls >> nf)) continue;
    if (!s.catalog.nfs.count(nf))
      throw ValidationError("deployment file names unknown NF " + nf);
    std::string id;
    while (ls >> id) {
      int v = s.network.index_of(id);
      if (v < 0) throw ValidationError("deployment file names unknown node " + id);
      dep.placed[nf].insert(v);
    }
  }
  return dep;
}

int run_path(const Scenario& s, bool robust) {
  for (const auto& d : s.demands) {
    Demand chain = d.ordered ? d : canonicalize_nonchained(d);
    AuxNetwork aux = build_sfc_aux(s, chain);
    ServicePath sp = robust ? robust_sfc_path(aux) : sfc_shortest_path(aux);
    double surv = 1.0;
    for (int a : sp.aux_nodes) {
      const AuxNode& node = aux.nodes[a];
      if (!node.nf.empty()) surv *= 1.0 - s.network.node(node.phys).failure_prob;
    }
    std::cout << id_sequence(s, sp.physical) << " | " << num12(sp.total_weight)
              << " | " << num12(sp.bottleneck) << " | " << num12(surv) << "\n";
  }
  return 0;
}

int run_metrics(const Scenario& s, const std::string& deploy_file,
                const std::string& routing_file) {
  Deployment dep = deploy_file.empty() ? full_pool_deployment(s)
                                       : read_deployment(s, deploy_file);
  std::vector<std::vector<std::vector<int>>> pinned;
  if (!routing_file.empty()) pinned = read_routing(s, routing_file);
  MetricReport rep = system_metrics(s, dep, pinned);

  bool with_exact = !pinned.empty();
  std::cout << (with_exact ? "demand,rp,fp,exact\n" : "demand,rp,fp\n");
  for (std::size_t i = 0; i < s.demands.size(); ++i) {
    const DemandMetric& m = rep.demands[i];
    std::cout << m.demand_id << ',' << num12(m.rp) << ',' << num12(m.fp);
    if (with_exact)
      std::cout << ','
                << num12(exact_reliability(s, dep, s.demands[i], pinned[i][0]));
    std::cout << "\n";
  }
  std::cout << "system," << num12(rep.system_rp) << ',' << num12(rep.system_fp)
            << "\n";
  return 0;
}

int run_sfork(const Scenario& s, double delta, bool oracle) {
  ForkInstance fork = make_fork_instance(s);
  ForkSolution sol = solve_sfork(fork, delta);
  std::cout << "metric,value\n";
  std::cout << "alpha," << num12(sfork_alpha(delta)) << "\n";
  std::cout << "beta," << num12(sfork_beta(delta)) << "\n";
  std::cout << "deploy_cost," << num12(sol.deploy_cost) << "\n";
  std::cout << "conn_cost," << num12(sol.conn_cost) << "\n";
  std::cout << "total," << num12(sol.total()) << "\n";
  if (oracle) {
    ForkSolution best = brute_force_sfork(fork);
    std::cout << "oracle_total," << num12(best.total()) << "\n";
    std::cout << "ratio," << num12(sol.total() / best.total()) << "\n";
    std::cout << "bound," << num12(std::max(sfork_alpha(delta), sfork_beta(delta)))
              << "\n";
  }
  return 0;
}

int run_milp(const Scenario& s, const std::string& mode, const std::string& log,
             int k, const std::string& export_file, bool solve) {
  LogMode lm = log == "failure" ? LogMode::failure : LogMode::survival;
  auto paths = default_candidate_paths(s, k);
  MilpModel model = mode == "sfc" ? build_sfc_model(s, paths, lm)
                                  : build_nonchained_model(s, paths, lm);
  if (!export_file.empty()) {
    std::ofstream out(export_file, std::ios::binary | std::ios::trunc);
    if (!out.good()) throw ValidationError("cannot write LP file " + export_file);
    out << export_lp(model);
    std::cout << "exported," << export_file << "\n";
  }
  if (!solve) {
    if (export_file.empty())
      std::cout << "vars," << model.vars.size() << "\nrows," << model.rows.size()
                << "\n";
    return 0;
  }

  SolveResult res = solve_exact(model);
  if (res.status == SolveStatus::guard_exceeded)
    throw GuardExceeded("instance exceeds the exact solver guard; use --export");
  if (res.status == SolveStatus::infeasible)
    throw InfeasibleError("no deployment satisfies the copy limits and candidates");
  Extraction ex = extract_solution(model, res, s);
  std::cout << "status,optimal\n";
  std::cout << "objective," << num12(res.objective) << "\n";
  for (const auto& [f, nodes] : ex.deployment.placed) {
    std::cout << "deploy," << f;
    for (int v : nodes) std::cout << ',' << s.network.node(v).id;
    std::cout << "\n";
  }
  for (const auto& [id, walk] : ex.routing)
    std::cout << "route," << id << ',' << id_sequence(s, walk) << "\n";
  std::cout << "system_rp," << num12(ex.report.system_rp) << "\n";
  std::cout << "system_fp," << num12(ex.report.system_fp) << "\n";
  return 0;
}

int run_experiment(const ExperimentSpec& spec, const std::string& out_dir) {
  ResultTable table = spec.kind == ExperimentKind::sfc_survivability
                          ? run_sfc_experiment(spec)
                          : run_nonchained_experiment(spec);
  for (const auto& p : emit_outputs(table, spec, out_dir)) std::cout << p << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust VNF provisioning toolkit"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  int jobs = 1;
  app.add_option("--scenario", scenario_file, "scenario file to load");
  app.add_option("--seed", seed, "random seed for experiments");
  app.add_option("--out", out_dir, "output directory for emitted files");
  app.add_option("--jobs", jobs, "worker threads for experiments");

  auto* path_cmd =
      app.add_subcommand("path", "service paths for every demand in the scenario");
  bool robust = false;
  path_cmd->add_flag("--robust", robust,
                     "maximize the survivability bottleneck instead of weight");

  auto* metrics_cmd = app.add_subcommand(
      "metrics", "reliability and failure metrics for a deployment");
  std::string deploy_file, routing_file;
  metrics_cmd->add_option("--deploy", deploy_file,
                          "deployment file (default: every pool node)");
  metrics_cmd->add_option("--routing", routing_file,
                          "pinned walk per demand; adds the exact column");

  auto* sfork_cmd =
      app.add_subcommand("sfork", "approximate fork provisioning costs");
  double delta = kDefaultAugmentScale;
  bool oracle = false;
  sfork_cmd->add_option("--delta", delta, "augmentation scale parameter");
  sfork_cmd->add_flag("--oracle", oracle, "also brute force and print the ratio");

  auto* milp_cmd = app.add_subcommand("milp", "exact deployment optimization");
  std::string mode = "nonchained", log = "survival", export_file;
  int k = 10;
  bool solve = false;
  milp_cmd->add_option("--mode", mode, "model family")
      ->check(CLI::IsMember({"nonchained", "sfc"}));
  milp_cmd->add_option("--log", log, "objective log convention")
      ->check(CLI::IsMember({"survival", "failure"}));
  milp_cmd->add_option("--k", k, "candidate walks per demand");
  milp_cmd->add_option("--export", export_file, "write CPLEX LP text here");
  milp_cmd->add_flag("--solve", solve, "run the exact solver and print the result");

  auto* exp_cmd = app.add_subcommand("experiment", "run a sweep protocol");
  std::string kind = "reliability", topology;
  ExperimentSpec spec;
  exp_cmd->add_option("--kind", kind, "protocol to run")
      ->check(CLI::IsMember({"reliability", "deployment", "sfc"}));
  exp_cmd->add_option("--topology", topology, "override the built-in substrate");
  exp_cmd->add_option("--points", spec.sweep_points, "sweep points");
  exp_cmd->add_option("--samples", spec.samples, "samples per point");
  exp_cmd->add_option("--lo", spec.sweep_lo, "lowest mean failure probability");
  exp_cmd->add_option("--hi", spec.sweep_hi, "highest mean failure probability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*path_cmd) return run_path(need_scenario(scenario_file), robust);
    if (*metrics_cmd)
      return run_metrics(need_scenario(scenario_file), deploy_file, routing_file);
    if (*sfork_cmd) return run_sfork(need_scenario(scenario_file), delta, oracle);
    if (*milp_cmd)
      return run_milp(need_scenario(scenario_file), mode, log, k, export_file,
                      solve);
    if (*exp_cmd) {
      spec.kind = kind == "deployment" ? ExperimentKind::nonchained_deployment
                  : kind == "sfc"      ? ExperimentKind::sfc_survivability
                                       : ExperimentKind::nonchained_reliability;
      spec.topology = topology;
      spec.seed = seed;
      spec.jobs = jobs;
      return run_experiment(spec, out_dir);
    }
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 1;
  } catch (const GuardExceeded& e) {
    std::cerr << "guard exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
