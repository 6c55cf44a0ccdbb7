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

#include "rnfv/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include "rnfv/errors.hpp"
#include "rnfv/metrics.hpp"
#include "rnfv/milp.hpp"
#include "rnfv/netmodel.hpp"
#include "rnfv/rng.hpp"

namespace rnfv {

namespace {

std::string num12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<double> sweep_values(const ExperimentSpec& spec) {
  if (spec.sweep_points < 1) throw ValidationError("sweep needs at least one point");
  if (spec.sweep_lo < 0.0 || spec.sweep_hi >= 1.0 || spec.sweep_hi < spec.sweep_lo)
    throw ValidationError("sweep range must satisfy 0 <= lo <= hi < 1");
  if (spec.samples < 1) throw ValidationError("need at least one sample per point");
  std::vector<double> out;
  for (int j = 0; j < spec.sweep_points; ++j) {
    double t = spec.sweep_points == 1
                   ? 0.0
                   : static_cast<double>(j) / (spec.sweep_points - 1);
    out.push_back(spec.sweep_lo + (spec.sweep_hi - spec.sweep_lo) * t);
  }
  return out;
}

// One uniform draw per (sample, node), reused at every sweep mean and pool
// fraction. The quantile map is monotone in the mean, so each sampled
// probability moves the same way as the sweep does.
std::vector<std::vector<double>> draw_uniforms(const ExperimentSpec& spec, int nodes) {
  std::vector<std::vector<double>> u(spec.samples, std::vector<double>(nodes));
  for (int t = 0; t < spec.samples; ++t) {
    Rng rng(Rng::derive(spec.seed, 100 + static_cast<std::uint64_t>(t)));
    for (int i = 0; i < nodes; ++i) u[t][i] = rng.uniform();
  }
  return u;
}

double rho_at(double mean, double variance, double u) {
  if (mean <= 0.0) return 0.0;
  return failure_quantile(mean, variance, u);
}

void apply_probs(Scenario& s, const std::vector<double>& u, double mean,
                 double variance) {
  for (int i = 0; i < s.network.node_count(); ++i)
    s.network.node_mut(i).failure_prob = rho_at(mean, variance, u[i]);
}

void parallel_for(int total, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, total));
  if (jobs <= 1) {
    for (int i = 0; i < total; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < total && !failed.load(); i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
          failed.store(true);
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

ResultRow stat_row(double sweep, std::string series, const std::vector<double>& vals) {
  ResultRow row;
  row.sweep = sweep;
  row.series = std::move(series);
  row.samples = static_cast<int>(vals.size());
  double sum = std::accumulate(vals.begin(), vals.end(), 0.0);
  row.mean = sum / row.samples;
  double acc = 0.0;
  for (double v : vals) acc += (v - row.mean) * (v - row.mean);
  row.stddev = row.samples > 1 ? std::sqrt(acc / (row.samples - 1)) : 0.0;
  return row;
}

// Fixed demand pairs for the NSF protocols.
const std::vector<std::pair<int, int>> kNsfDemandPairs = {{1, 2}, {1, 4}, {2, 3},
                                                          {3, 5}, {4, 7}, {6, 7}};

std::vector<std::string> nf_names(int count, const std::string& prefix) {
  std::vector<std::string> out;
  for (int f = 0; f < count; ++f) out.push_back(prefix + std::to_string(f + 1));
  return out;
}

// Substrate plus demand list shared by every pool fraction; capabilities and
// catalog entries are attached per fraction from a prefix of one shuffled
// node order, so a larger fraction strictly extends a smaller one.
Scenario nonchained_base(const std::string& topology, int nf_count) {
  Scenario s;
  s.network = builtin_topology(topology);
  for (auto [a, b] : kNsfDemandPairs) {
    Demand d;
    d.source = std::to_string(a);
    d.target = std::to_string(b);
    d.nfs = nf_names(nf_count, "f");
    if (s.network.index_of(d.source) < 0 || s.network.index_of(d.target) < 0)
      throw ValidationError("demand endpoint missing from topology " + topology);
    s.demands.push_back(d);
  }
  return s;
}

void enable_nodes(Scenario& s, const std::vector<int>& hosts,
                  const std::vector<std::string>& nfs, int limit) {
  std::vector<int> sorted = hosts;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& f : nfs) {
    for (int v : sorted) s.network.node_mut(v).capabilities.insert(f);
    s.catalog.nfs.insert(f);
    s.catalog.pool[f] = sorted;
    s.catalog.limit[f] = limit;
  }
}

ResultTable finish(const ExperimentSpec& spec, std::vector<ResultRow> rows) {
  ResultTable t;
  t.rows = std::move(rows);
  t.seed = spec.seed;
  t.build_id = kBuildId;
  t.spec_hash = spec_fingerprint(spec);
  return t;
}

// Best worst-case service reliability per pool fraction: exact solve of the
// failure-log model over fixed candidate walks, then the metric value of the
// extracted deployment and routing. Infeasible samples score 0.
ResultTable reliability_protocol(const ExperimentSpec& spec) {
  std::string topology = spec.topology.empty() ? "nsf" : spec.topology;
  const int kNfTypes = 2;
  Scenario base = nonchained_base(topology, kNfTypes);
  int n = base.network.node_count();
  auto walks = default_candidate_paths(base, spec.candidate_walks);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng shuffler(Rng::derive(spec.seed, 7));
  shuffler.shuffle(order);

  std::vector<double> sweeps = sweep_values(spec);
  auto uniforms = draw_uniforms(spec, n);

  struct Task {
    int frac, point, sample;
  };
  std::vector<Task> tasks;
  for (int f = 0; f < static_cast<int>(spec.pool_fractions.size()); ++f)
    for (int j = 0; j < spec.sweep_points; ++j)
      for (int t = 0; t < spec.samples; ++t) tasks.push_back({f, j, t});
  std::vector<double> slot(tasks.size(), 0.0);

  parallel_for(static_cast<int>(tasks.size()), spec.jobs, [&](int idx) {
    const Task& task = tasks[idx];
    double frac = spec.pool_fractions[task.frac];
    int enabled = static_cast<int>(std::lround(frac * n));
    enabled = std::clamp(enabled, 1, n);
    Scenario s = base;
    enable_nodes(s, {order.begin(), order.begin() + enabled},
                 nf_names(kNfTypes, "f"), spec.host_budget);
    apply_probs(s, uniforms[task.sample], sweeps[task.point], spec.variance);

    MilpModel model = build_nonchained_model(s, walks, LogMode::failure);
    SolveResult res = solve_exact(model, 30);
    if (res.status == SolveStatus::guard_exceeded)
      throw GuardExceeded("reliability sweep instance exceeds the exact solver guard");
    if (res.status != SolveStatus::optimal) return;  // slot stays 0
    slot[idx] = extract_solution(model, res, s).report.system_rp;
  });

  std::vector<ResultRow> rows;
  for (int j = 0; j < spec.sweep_points; ++j)
    for (int f = 0; f < static_cast<int>(spec.pool_fractions.size()); ++f) {
      std::vector<double> vals;
      for (int t = 0; t < spec.samples; ++t)
        vals.push_back(slot[(f * spec.sweep_points + j) * spec.samples + t]);
      int pct = static_cast<int>(std::lround(spec.pool_fractions[f] * 100));
      rows.push_back(stat_row(sweeps[j], "pool" + std::to_string(pct), vals));
    }
  return finish(spec, rows);
}

// Hosts needed to reach the target reliability: grow the deployment one copy
// at a time, always taking the first candidate that improves the metric the
// most, and report how many distinct hosts the final deployment uses.
ResultTable deployment_protocol(const ExperimentSpec& spec) {
  std::string topology = spec.topology.empty() ? "nsf" : spec.topology;
  std::vector<double> sweeps = sweep_values(spec);

  struct Series {
    int nf_count;
    Scenario base;
    std::vector<std::vector<std::vector<int>>> walks;
  };
  std::vector<Series> series;
  int n = 0;
  for (int c : spec.nf_counts) {
    if (c < 1) throw ValidationError("NF count per demand must be positive");
    Series sr;
    sr.nf_count = c;
    sr.base = nonchained_base(topology, c);
    n = sr.base.network.node_count();
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    enable_nodes(sr.base, all, nf_names(c, "f"), n);
    sr.walks = default_candidate_paths(sr.base, spec.candidate_walks);
    series.push_back(std::move(sr));
  }
  auto uniforms = draw_uniforms(spec, n);

  struct Task {
    int sr, point, sample;
  };
  std::vector<Task> tasks;
  for (int sr = 0; sr < static_cast<int>(series.size()); ++sr)
    for (int j = 0; j < spec.sweep_points; ++j)
      for (int t = 0; t < spec.samples; ++t) tasks.push_back({sr, j, t});
  std::vector<double> slot(tasks.size(), 0.0);

  parallel_for(static_cast<int>(tasks.size()), spec.jobs, [&](int idx) {
    const Task& task = tasks[idx];
    const Series& sr = series[task.sr];
    Scenario s = sr.base;
    apply_probs(s, uniforms[task.sample], sweeps[task.point], spec.variance);

    // Secondary score for the growth step. A demand needing several NF types
    // sees no reliability change until one walk carries them all, and the
    // worst NF can mask progress on the others, so ties break toward the
    // placement that most lowers the summed per-walk, per-NF products. That
    // sum strictly drops for any copy landing on any candidate walk, which
    // keeps a gradient through every reliability plateau.
    auto product_mass = [&](const Deployment& trial) {
      double mass = 0.0;
      for (std::size_t di = 0; di < s.demands.size(); ++di)
        for (const auto& w : sr.walks[di]) {
          std::set<int> nodes(w.begin(), w.end());
          for (const auto& f : s.demands[di].nfs) {
            double prod = 1.0;
            auto it = trial.placed.find(f);
            if (it != trial.placed.end())
              for (int v : nodes)
                if (it->second.count(v)) prod *= s.network.node(v).failure_prob;
            mass += prod;
          }
        }
      return mass;
    };

    Deployment dep;
    double best_rp = system_metrics(s, dep, sr.walks).system_rp;
    double best_mass = product_mass(dep);
    while (best_rp < spec.target_reliability) {
      std::string pick_f;
      int pick_v = -1;
      double pick_rp = best_rp;
      double pick_mass = best_mass;
      for (const auto& f : s.catalog.nfs)
        for (int v : s.catalog.pool.at(f)) {
          if (dep.placed.count(f) && dep.placed.at(f).count(v)) continue;
          Deployment trial = dep;
          trial.placed[f].insert(v);
          double rp = system_metrics(s, trial, sr.walks).system_rp;
          bool better = rp > pick_rp + 1e-15;
          if (better) {
            pick_mass = product_mass(trial);
          } else if (rp > pick_rp - 1e-15) {
            double mass = product_mass(trial);
            better = mass < pick_mass - 1e-15;
            if (better) pick_mass = mass;
          }
          if (better) {
            pick_rp = rp;
            pick_f = f;
            pick_v = v;
          }
        }
      if (pick_v < 0) break;  // nothing improves; report the plateau size
      dep.placed[pick_f].insert(pick_v);
      best_rp = pick_rp;
      best_mass = pick_mass;
    }
    std::set<int> hosts;
    for (const auto& [f, nodes] : dep.placed) hosts.insert(nodes.begin(), nodes.end());
    slot[idx] = static_cast<double>(hosts.size());
  });

  std::vector<ResultRow> rows;
  for (int j = 0; j < spec.sweep_points; ++j)
    for (int sr = 0; sr < static_cast<int>(series.size()); ++sr) {
      std::vector<double> vals;
      for (int t = 0; t < spec.samples; ++t)
        vals.push_back(slot[(sr * spec.sweep_points + j) * spec.samples + t]);
      rows.push_back(
          stat_row(sweeps[j], "nf" + std::to_string(series[sr].nf_count), vals));
    }
  return finish(spec, rows);
}

struct GraphShape {
  std::string name;
  std::vector<int> divisors;  // per-stage pool divisor
};

std::vector<GraphShape> forwarding_graphs(int chain_length) {
  GraphShape straight{"1SFC", {}}, root{"rFork", {}}, inner{"bFork", {}};
  for (int st = 0; st < chain_length; ++st) {
    straight.divisors.push_back(1);
    root.divisors.push_back(st == 0 ? 1 : 2);
    inner.divisors.push_back(1 << std::min(st, 20));
  }
  return {straight, root, inner};
}

// Chained scenario for one forwarding-graph shape: stage pools are prefixes
// of a single shuffled node order, shrunk by the per-stage divisor, so the
// straight chain's pools contain the root fork's, which contain the deep
// fork's. Deployment is the full pool of every stage.
Scenario sfc_scenario(const PhysicalNetwork& net, const std::vector<int>& order,
                      const GraphShape& shape, int stage_pool,
                      const std::vector<Demand>& demands, Deployment* dep) {
  Scenario s;
  s.network = net;
  s.demands = demands;
  for (std::size_t st = 0; st < shape.divisors.size(); ++st) {
    int size = std::max(1, stage_pool / shape.divisors[st]);
    std::vector<int> pool(order.begin(), order.begin() + size);
    enable_nodes(s, pool, {"c" + std::to_string(st + 1)}, size);
    if (dep)
      dep->placed["c" + std::to_string(st + 1)] =
          std::set<int>(pool.begin(), pool.end());
  }
  return s;
}

ResultTable sfc_protocol(const ExperimentSpec& spec) {
  std::string topology = spec.topology.empty() ? "coronet" : spec.topology;
  PhysicalNetwork net = builtin_topology(topology);
  int n = net.node_count();
  if (spec.chain_length < 1) throw ValidationError("chain length must be positive");
  if (spec.stage_pool < 1 || spec.stage_pool > n)
    throw ValidationError("stage pool size must fit the topology");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng shuffler(Rng::derive(spec.seed, 11));
  shuffler.shuffle(order);

  int max_demands = 0;
  for (int dc : spec.demand_counts) max_demands = std::max(max_demands, dc);
  std::vector<Demand> all_demands;
  Rng pairs(Rng::derive(spec.seed, 13));
  std::set<std::pair<int, int>> used;
  while (static_cast<int>(all_demands.size()) < max_demands) {
    int src = static_cast<int>(pairs.below(n));
    int tgt = static_cast<int>(pairs.below(n));
    if (src == tgt || used.count({src, tgt})) continue;
    used.insert({src, tgt});
    Demand d;
    d.source = std::to_string(src + 1);
    d.target = std::to_string(tgt + 1);
    d.ordered = true;
    d.nfs = nf_names(spec.chain_length, "c");
    all_demands.push_back(d);
  }

  std::vector<GraphShape> shapes = forwarding_graphs(spec.chain_length);
  std::vector<double> sweeps = sweep_values(spec);
  auto uniforms = draw_uniforms(spec, n);
  std::vector<ResultRow> rows;

  // Feasibility needs every demand to reach a covered walk, which does not
  // depend on the probability values; zero probabilities make the positive
  // survivable-probability test exact.
  for (int dc : spec.demand_counts) {
    std::vector<Demand> demands(all_demands.begin(), all_demands.begin() + dc);
    for (const auto& shape : shapes) {
      double found = 0.0;
      for (int b = 1; b <= spec.stage_pool; ++b) {
        Deployment dep;
        Scenario s = sfc_scenario(net, order, shape, b, demands, &dep);
        if (system_metrics(s, dep).system_rp > 0.0) {
          found = b;
          break;
        }
      }
      ResultRow row;
      row.sweep = dc;
      row.series = "minnodes/" + shape.name;
      row.mean = found;
      row.samples = 1;
      rows.push_back(row);
    }
  }

  struct Task {
    int dc_idx, shape, point, sample;
  };
  std::vector<Task> tasks;
  for (int dcx = 0; dcx < static_cast<int>(spec.demand_counts.size()); ++dcx)
    for (int sh = 0; sh < static_cast<int>(shapes.size()); ++sh)
      for (int j = 0; j < spec.sweep_points; ++j)
        for (int t = 0; t < spec.samples; ++t) tasks.push_back({dcx, sh, j, t});
  std::vector<double> slot(tasks.size(), 0.0);

  parallel_for(static_cast<int>(tasks.size()), spec.jobs, [&](int idx) {
    const Task& task = tasks[idx];
    int dc = spec.demand_counts[task.dc_idx];
    std::vector<Demand> demands(all_demands.begin(), all_demands.begin() + dc);
    Deployment dep;
    Scenario s =
        sfc_scenario(net, order, shapes[task.shape], spec.stage_pool, demands, &dep);
    apply_probs(s, uniforms[task.sample], sweeps[task.point], spec.variance);
    slot[idx] = system_metrics(s, dep).system_rp;
  });

  for (int dcx = 0; dcx < static_cast<int>(spec.demand_counts.size()); ++dcx)
    for (int j = 0; j < spec.sweep_points; ++j)
      for (int sh = 0; sh < static_cast<int>(shapes.size()); ++sh) {
        std::vector<double> vals;
        for (int t = 0; t < spec.samples; ++t)
          vals.push_back(
              slot[((dcx * static_cast<int>(shapes.size()) + sh) * spec.sweep_points +
                    j) *
                       spec.samples +
                   t]);
        rows.push_back(stat_row(
            sweeps[j],
            shapes[sh].name + "/d" + std::to_string(spec.demand_counts[dcx]), vals));
      }
  return finish(spec, rows);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::nonchained_reliability:
      return "nonchained-reliability";
    case ExperimentKind::nonchained_deployment:
      return "nonchained-deployment";
    case ExperimentKind::sfc_survivability:
      return "sfc-survivability";
  }
  throw ValidationError("unknown experiment kind");
}

}  // namespace

ResultTable run_nonchained_experiment(const ExperimentSpec& spec) {
  if (spec.kind == ExperimentKind::nonchained_reliability)
    return reliability_protocol(spec);
  if (spec.kind == ExperimentKind::nonchained_deployment)
    return deployment_protocol(spec);
  throw ValidationError("spec kind is not a non-chained protocol");
}

ResultTable run_sfc_experiment(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::sfc_survivability)
    throw ValidationError("spec kind is not the chain survivability protocol");
  return sfc_protocol(spec);
}

std::string spec_fingerprint(const ExperimentSpec& spec) {
  std::ostringstream ser;
  ser << kind_name(spec.kind) << '|' << spec.topology << '|' << num12(spec.sweep_lo)
      << '|' << num12(spec.sweep_hi) << '|' << spec.sweep_points << '|'
      << num12(spec.variance) << '|' << spec.samples << '|' << spec.seed;
  for (double f : spec.pool_fractions) ser << "|pf" << num12(f);
  ser << '|' << spec.host_budget << '|' << spec.candidate_walks << '|'
      << num12(spec.target_reliability);
  for (int c : spec.nf_counts) ser << "|nc" << c;
  ser << '|' << spec.chain_length << '|' << spec.stage_pool;
  for (int d : spec.demand_counts) ser << "|dc" << d;
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(ser.str())));
  return buf;
}

std::string render_csv(const ResultTable& t) {
  std::ostringstream out;
  out << "# seed " << t.seed << "\n";
  out << "# build " << t.build_id << "\n";
  out << "# params " << t.spec_hash << "\n";
  out << "sweep,series,mean,stddev,samples\n";
  for (const auto& r : t.rows)
    out << num12(r.sweep) << ',' << csv_field(r.series) << ',' << num12(r.mean) << ','
        << num12(r.stddev) << ',' << r.samples << "\n";
  return out.str();
}

std::string render_plot_data(const ResultTable& t) {
  std::ostringstream out;
  for (const auto& r : t.rows)
    out << num12(r.sweep) << ' ' << r.series << ' ' << num12(r.mean) << "\n";
  return out.str();
}

std::vector<std::string> emit_outputs(const ResultTable& t, const ExperimentSpec& spec,
                                      const std::string& out_dir) {
  std::string stem = out_dir + "/" + kind_name(spec.kind) + "-" + t.spec_hash;
  std::vector<std::string> paths = {stem + ".csv", stem + ".dat"};
  std::vector<std::string> contents = {render_csv(t), render_plot_data(t)};
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::ofstream out(paths[i], std::ios::binary | std::ios::trunc);
    if (!out.good()) throw ValidationError("cannot write output file " + paths[i]);
    out << contents[i];
    if (!out.good()) throw ValidationError("cannot write output file " + paths[i]);
  }
  return paths;
}

}  // namespace rnfv
