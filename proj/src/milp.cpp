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

#include "rnfv/milp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rnfv/auxnet.hpp"
#include "rnfv/errors.hpp"
#include "rnfv/pathfind.hpp"

namespace rnfv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieEps = 1e-12;

double node_weight(double failure_prob, LogMode mode) {
  if (mode == LogMode::survival) return std::log1p(failure_prob);
  return std::log(std::max(failure_prob, kFailureLogFloor));
}

double product_term(double failure_prob, LogMode mode) {
  if (mode == LogMode::survival) return 1.0 + failure_prob;
  return std::max(failure_prob, kFailureLogFloor);
}

double order_count(const Demand& d) {
  if (!d.ordered || d.canonicalized) return 1.0;
  double v = 1.0;
  for (std::size_t i = 2; i <= d.nfs.size(); ++i) v *= static_cast<double>(i);
  return v;
}

// LP identifiers: keep letters, digits and underscores, map the rest away.
std::string lp_token(const std::string& raw) {
  std::string out;
  for (char c : raw)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  return out.empty() ? std::string("_") : out;
}

int add_var(MilpModel& m, std::string name, double lb, double ub, bool integral) {
  m.vars.push_back({std::move(name), lb, ub, integral});
  m.objective.push_back(0.0);
  return static_cast<int>(m.vars.size()) - 1;
}

void add_row(MilpModel& m, std::string name, std::vector<std::pair<int, double>> coeff,
             char sense, double rhs) {
  m.rows.push_back({std::move(name), std::move(coeff), sense, rhs});
}

bool in_pool(const Scenario& s, const std::string& nf, int node) {
  const auto& pool = s.catalog.pool.at(nf);
  return std::binary_search(pool.begin(), pool.end(), node);
}

// A walk respects a chain when its node sequence can host the stages in
// order, judged against the candidate pools; consecutive stages may share a
// node.
bool stage_ordered(const Scenario& s, const Demand& d, const std::vector<int>& walk) {
  std::size_t stage = 0;
  for (int v : walk) {
    while (stage < d.nfs.size() && in_pool(s, d.nfs[stage], v)) ++stage;
    if (stage == d.nfs.size()) return true;
  }
  return stage == d.nfs.size();
}

std::vector<int> distinct_nodes(const std::vector<int>& walk) {
  std::vector<int> out = walk;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Cap on the stage-placement sweep per walk; chains that exceed it are too
// rich for the structured machinery and should go through the LP export
// with a trimmed candidate list.
inline constexpr int kChainRealizationGuard = 4096;

// Distinct copy sets that can host the chain's stages along the walk, with
// stage positions non-decreasing and consecutive stages free to share a
// node. Each set is sorted and duplicate free.
std::vector<std::vector<std::pair<std::string, int>>> chain_realizations(
    const Scenario& s, const Demand& d, const std::vector<int>& walk) {
  std::vector<std::vector<int>> options(d.nfs.size());
  for (std::size_t stage = 0; stage < d.nfs.size(); ++stage)
    for (int v : distinct_nodes(walk))
      if (in_pool(s, d.nfs[stage], v)) options[stage].push_back(v);

  std::set<std::vector<std::pair<std::string, int>>> seen;
  std::vector<int> copies(d.nfs.size());
  long long visited = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t stage) {
    if (stage == d.nfs.size()) {
      if (++visited > kChainRealizationGuard)
        throw GuardExceeded("too many stage placements on one candidate walk");
      std::size_t at = 0;
      for (int v : walk) {
        while (at < copies.size() && copies[at] == v) ++at;
        if (at == copies.size()) break;
      }
      if (at != copies.size()) return;
      std::vector<std::pair<std::string, int>> members;
      for (std::size_t l = 0; l < copies.size(); ++l)
        members.push_back({d.nfs[l], copies[l]});
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
      seen.insert(std::move(members));
      return;
    }
    for (int v : options[stage]) {
      copies[stage] = v;
      rec(stage + 1);
    }
  };
  rec(0);
  return {seen.begin(), seen.end()};
}

MilpModel build_model(const Scenario& s,
                      const std::vector<std::vector<std::vector<int>>>& paths,
                      LogMode mode, bool chained) {
  if (s.demands.empty()) throw ValidationError("the model needs at least one demand");
  if (paths.size() != s.demands.size())
    throw ValidationError("candidate walk lists do not match the demand list");

  MilpModel m;
  m.log_mode = mode;
  m.chained = chained;
  m.nf_order.assign(s.catalog.nfs.begin(), s.catalog.nfs.end());
  int n = s.network.node_count();
  for (int i = 0; i < n; ++i)
    m.node_log.push_back(node_weight(s.network.node(i).failure_prob, mode));

  for (std::size_t di = 0; di < s.demands.size(); ++di) {
    const Demand& d = s.demands[di];
    if (chained && !d.ordered)
      throw ValidationError("demand " + d.id() + " is order-free; the chain model " +
                            "needs ordered demands");
    std::vector<std::vector<int>> keep;
    for (const auto& p : paths[di]) {
      if (p.empty()) throw ValidationError("empty candidate walk for demand " + d.id());
      for (int v : p)
        if (v < 0 || v >= n)
          throw ValidationError("candidate walk for demand " + d.id() +
                                " leaves the substrate");
      if (chained && !stage_ordered(s, d, p)) continue;
      keep.push_back(p);
    }
    if (keep.empty())
      throw ValidationError(chained
                                ? "demand " + d.id() + " has no stage-ordered candidate walk"
                                : "demand " + d.id() + " has no candidate walk");
    m.paths.push_back(std::move(keep));
    m.order_penalty.push_back(chained ? std::log(order_count(d)) : 0.0);
    m.demand_ids.push_back(d.id());
    m.demand_nfs.push_back(d.nfs);
  }
  for (const auto& f : m.nf_order) m.copy_cap[f] = s.catalog.limit.at(f);

  // Variables, in a fixed declaration order the export reuses.
  m.lambda = add_var(m, "lambda", -kInf, kInf, false);
  m.objective[m.lambda] = 1.0;
  for (const auto& f : m.nf_order)
    for (int i = 0; i < n; ++i)
      m.z_index[{f, i}] = add_var(m, "z_" + lp_token(f) + "_" + std::to_string(i), 0.0,
                                  in_pool(s, f, i) ? 1.0 : 0.0, true);
  for (int i = 0; i < n; ++i)
    m.h_index.push_back(add_var(m, "h_" + std::to_string(i), 0.0, 1.0, true));
  m.x_index.resize(m.paths.size());
  for (std::size_t di = 0; di < m.paths.size(); ++di)
    for (std::size_t p = 0; p < m.paths[di].size(); ++p)
      m.x_index[di].push_back(add_var(
          m, "x_" + std::to_string(di) + "_" + std::to_string(p), 0.0, 1.0, true));
  for (std::size_t di = 0; di < m.paths.size(); ++di)
    for (const auto& f : m.nf_order)
      for (int i = 0; i < n; ++i)
        m.y_index[{static_cast<int>(di), f, i}] =
            add_var(m,
                    "y_" + std::to_string(i) + "_" + lp_token(f) + "_" + std::to_string(di),
                    0.0, 1.0, true);
  for (std::size_t di = 0; di < m.paths.size(); ++di)
    for (const auto& f : m.nf_order)
      m.xi_index[{static_cast<int>(di), f}] = add_var(
          m, "xi_" + lp_token(f) + "_" + std::to_string(di), -kInf, kInf, false);
  if (chained)
    for (std::size_t di = 0; di < m.paths.size(); ++di) {
      m.omega_index.push_back(
          add_var(m, "omega_" + std::to_string(di), -kInf, kInf, false));
      m.beta_index.push_back(add_var(m, "beta_" + std::to_string(di), 0.0, 1.0, true));
    }
  if (chained)
    for (std::size_t di = 0; di < m.paths.size(); ++di)
      for (std::size_t p = 0; p < m.paths[di].size(); ++p) {
        auto sets = chain_realizations(s, s.demands[di], m.paths[di][p]);
        for (std::size_t t = 0; t < sets.size(); ++t) {
          ChainTuple ct;
          ct.var = add_var(m,
                           "chain_" + std::to_string(di) + "_" + std::to_string(p) +
                               "_" + std::to_string(t),
                           0.0, 1.0, true);
          ct.demand = static_cast<int>(di);
          ct.path = static_cast<int>(p);
          ct.members = std::move(sets[t]);
          m.chain_tuples.push_back(std::move(ct));
        }
      }

  double penalty_sum = 0.0;
  for (double p : m.order_penalty) penalty_sum += p;
  m.big_m = 1.0;
  for (double w : m.node_log) m.big_m += std::abs(w);
  m.big_m += penalty_sum;

  // Shared copy budget: the distinct-host count is capped by every NF's
  // limit, which makes the smallest limit the effective one.
  for (const auto& f : m.nf_order) {
    std::vector<std::pair<int, double>> row;
    for (int i = 0; i < n; ++i) row.push_back({m.h_index[i], 1.0});
    add_row(m, "hostcap_" + lp_token(f), std::move(row), 'L',
            static_cast<double>(s.catalog.limit.at(f)));
  }

  // Objective bound rows per demand and requested NF.
  for (std::size_t di = 0; di < m.paths.size(); ++di) {
    const Demand& d = s.demands[di];
    for (const auto& f : d.nfs) {
      int xi = m.xi_index.at({static_cast<int>(di), f});
      if (!chained) {
        add_row(m, "worst_" + lp_token(f) + "_" + std::to_string(di),
                {{m.lambda, 1.0}, {xi, -1.0}}, 'G', 0.0);
      } else {
        add_row(m, "shift_" + lp_token(f) + "_" + std::to_string(di),
                {{m.omega_index[di], 1.0}, {xi, -1.0}}, 'G', -m.order_penalty[di]);
      }
    }
    if (chained)
      add_row(m, "worst_" + std::to_string(di),
              {{m.lambda, 1.0}, {m.omega_index[di], -1.0}}, 'G', 0.0);
  }

  // Evaluated products as weighted sums of the copy-on-walk indicators.
  for (std::size_t di = 0; di < m.paths.size(); ++di)
    for (const auto& f : m.nf_order) {
      std::vector<std::pair<int, double>> row;
      row.push_back({m.xi_index.at({static_cast<int>(di), f}), 1.0});
      for (int i = 0; i < n; ++i)
        row.push_back({m.y_index.at({static_cast<int>(di), f, i}), -m.node_log[i]});
      add_row(m, "evalsum_" + lp_token(f) + "_" + std::to_string(di), std::move(row),
              'E', 0.0);
    }

  // Linking: y is forced up when the copy exists, the walk passes the node
  // and the NF is requested, and capped by each of those three conditions.
  for (std::size_t di = 0; di < m.paths.size(); ++di) {
    const Demand& d = s.demands[di];
    for (const auto& f : m.nf_order) {
      double gamma =
          std::count(d.nfs.begin(), d.nfs.end(), f) > 0 ? 1.0 : 0.0;
      for (std::size_t p = 0; p < m.paths[di].size(); ++p) {
        std::set<int> on(m.paths[di][p].begin(), m.paths[di][p].end());
        for (int i = 0; i < n; ++i) {
          int y = m.y_index.at({static_cast<int>(di), f, i});
          int z = m.z_index.at({f, i});
          std::vector<std::pair<int, double>> row = {{y, 1.0}, {z, -1.0}};
          if (on.count(i)) row.push_back({m.x_index[di][p], -1.0});
          add_row(m,
                  "onwalk_" + std::to_string(i) + "_" + lp_token(f) + "_" +
                      std::to_string(di) + "_" + std::to_string(p),
                  std::move(row), 'G', gamma - 2.0);
        }
      }
      for (int i = 0; i < n; ++i) {
        int y = m.y_index.at({static_cast<int>(di), f, i});
        int z = m.z_index.at({f, i});
        add_row(m,
                "ycopy_" + std::to_string(i) + "_" + lp_token(f) + "_" +
                    std::to_string(di),
                {{y, 1.0}, {z, -1.0}}, 'L', 0.0);
        std::vector<std::pair<int, double>> row = {{y, 1.0}};
        for (std::size_t p = 0; p < m.paths[di].size(); ++p) {
          std::set<int> on(m.paths[di][p].begin(), m.paths[di][p].end());
          if (on.count(i)) row.push_back({m.x_index[di][p], -1.0});
        }
        add_row(m,
                "ywalk_" + std::to_string(i) + "_" + lp_token(f) + "_" +
                    std::to_string(di),
                std::move(row), 'L', 0.0);
        add_row(m,
                "yreq_" + std::to_string(i) + "_" + lp_token(f) + "_" +
                    std::to_string(di),
                {{y, 1.0}}, 'L', gamma);
      }
    }
  }

  // Hosts cover every copy placed on them.
  for (const auto& f : m.nf_order)
    for (int i = 0; i < n; ++i)
      add_row(m, "hostcopy_" + lp_token(f) + "_" + std::to_string(i),
              {{m.h_index[i], 1.0}, {m.z_index.at({f, i}), -1.0}}, 'G', 0.0);

  // Exactly one walk per demand.
  for (std::size_t di = 0; di < m.paths.size(); ++di) {
    std::vector<std::pair<int, double>> row;
    for (int x : m.x_index[di]) row.push_back({x, 1.0});
    add_row(m, "onewalk_" + std::to_string(di), std::move(row), 'E', 1.0);
  }

  // Every requested NF must have a copy on the chosen walk; without this the
  // empty deployment would be feasible and trivially optimal.
  for (std::size_t di = 0; di < m.paths.size(); ++di)
    for (const auto& f : s.demands[di].nfs) {
      std::vector<std::pair<int, double>> row;
      for (int i = 0; i < n; ++i)
        row.push_back({m.y_index.at({static_cast<int>(di), f, i}), 1.0});
      add_row(m, "cover_" + lp_token(f) + "_" + std::to_string(di), std::move(row),
              'G', 1.0);
    }

  // A chain walk is selectable only when the deployment can host its stages
  // in order: a realization indicator needs every copy it uses, and the
  // chosen walk needs at least one live realization.
  if (chained) {
    for (std::size_t t = 0; t < m.chain_tuples.size(); ++t) {
      const ChainTuple& ct = m.chain_tuples[t];
      for (std::size_t j = 0; j < ct.members.size(); ++j)
        add_row(m, "chainz_" + std::to_string(t) + "_" + std::to_string(j),
                {{ct.var, 1.0}, {m.z_index.at(ct.members[j]), -1.0}}, 'L', 0.0);
    }
    for (std::size_t di = 0; di < m.paths.size(); ++di)
      for (std::size_t p = 0; p < m.paths[di].size(); ++p) {
        std::vector<std::pair<int, double>> row = {{m.x_index[di][p], 1.0}};
        for (const auto& ct : m.chain_tuples)
          if (ct.demand == static_cast<int>(di) && ct.path == static_cast<int>(p))
            row.push_back({ct.var, -1.0});
        add_row(m, "chainpick_" + std::to_string(di) + "_" + std::to_string(p),
                std::move(row), 'L', 0.0);
      }
  }

  if (chained) {
    // One demand is marked as attaining the bound, and the mark pins the
    // bound to that demand's value exactly.
    std::vector<std::pair<int, double>> pick;
    for (int b : m.beta_index) pick.push_back({b, 1.0});
    add_row(m, "onepick", std::move(pick), 'E', 1.0);
    for (std::size_t di = 0; di < m.paths.size(); ++di) {
      add_row(m, "pintop_" + std::to_string(di),
              {{m.lambda, 1.0},
               {m.omega_index[di], -1.0},
               {m.beta_index[di], m.big_m}},
              'L', m.big_m);
      add_row(m, "pinbottom_" + std::to_string(di),
              {{m.lambda, 1.0},
               {m.omega_index[di], -1.0},
               {m.beta_index[di], -m.big_m}},
              'G', -m.big_m);
    }
  }
  return m;
}

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::vector<std::vector<int>>> default_candidate_paths(const Scenario& s,
                                                                   int k) {
  if (k < 1) throw ValidationError("candidate walk count must be at least 1");
  std::vector<std::vector<std::vector<int>>> out;
  for (const auto& d : s.demands) {
    std::vector<std::vector<int>> walks;
    if (d.ordered) {
      // Distinct placements can project onto the same physical walk; keep the
      // first occurrence so the candidate list stays duplicate free.
      AuxNetwork aux = build_sfc_aux(s, d);
      std::set<std::vector<int>> seen;
      for (const auto& sp : k_shortest_aux_paths(aux, k)) {
        if (seen.insert(sp.physical).second) walks.push_back(sp.physical);
      }
    } else {
      int src = s.network.index_of(d.source), tgt = s.network.index_of(d.target);
      for (const auto& wp : k_shortest_candidate_paths(s.network, src, tgt, k))
        walks.push_back(wp.nodes);
    }
    out.push_back(std::move(walks));
  }
  return out;
}

MilpModel build_nonchained_model(const Scenario& s,
                                 const std::vector<std::vector<std::vector<int>>>& paths,
                                 LogMode mode) {
  return build_model(s, paths, mode, false);
}

MilpModel build_sfc_model(const Scenario& s,
                          const std::vector<std::vector<std::vector<int>>>& paths,
                          LogMode mode) {
  return build_model(s, paths, mode, true);
}

std::string export_lp(const MilpModel& model) {
  std::ostringstream out;
  out << "\\ robust provisioning model (big M " << num17(model.big_m) << ")\n";
  out << "Minimize\n obj:";
  bool any = false;
  for (std::size_t v = 0; v < model.vars.size(); ++v)
    if (model.objective[v] != 0.0) {
      out << (any || model.objective[v] < 0 ? (model.objective[v] < 0 ? " - " : " + ")
                                            : " ")
          << num17(std::abs(model.objective[v])) << " " << model.vars[v].name;
      any = true;
    }
  if (!any) out << (model.vars.empty() ? " 0" : " 0 " + model.vars.front().name);
  out << "\nSubject To\n";
  for (const auto& r : model.rows) {
    out << " " << r.name << ":";
    bool first = true;
    for (const auto& [v, c] : r.coeff) {
      if (c == 0.0) continue;
      out << (first ? (c < 0 ? " - " : " ") : (c < 0 ? " - " : " + "))
          << num17(std::abs(c)) << " " << model.vars[v].name;
      first = false;
    }
    out << (r.sense == 'L' ? " <= " : r.sense == 'G' ? " >= " : " = ")
        << num17(r.rhs) << "\n";
  }
  out << "Bounds\n";
  for (const auto& v : model.vars) {
    if (!v.integral && v.lb == -kInf && v.ub == kInf)
      out << " " << v.name << " free\n";
    else if (v.integral && v.ub == 0.0)
      out << " " << v.name << " = 0\n";
  }
  out << "Binary\n";
  for (const auto& v : model.vars)
    if (v.integral) out << " " << v.name << "\n";
  out << "End\n";
  return out.str();
}

SolveResult solve_exact(const MilpModel& model, int guard_bits) {
  SolveResult res;
  int n = static_cast<int>(model.node_log.size());

  // Free placement bits, grouped per host so the shared budget prunes.
  struct Bit {
    std::string nf;
    double weight;
  };
  std::vector<std::vector<Bit>> host_bits(n);
  int free_bits = 0;
  for (const auto& f : model.nf_order)
    for (int i = 0; i < n; ++i)
      if (model.vars[model.z_index.at({f, i})].ub > 0.0) {
        host_bits[i].push_back({f, model.node_log[i]});
        ++free_bits;
      }
  if (free_bits > guard_bits) {
    res.status = SolveStatus::guard_exceeded;
    return res;
  }

  int budget = std::numeric_limits<int>::max();
  for (const auto& [f, cap] : model.copy_cap) budget = std::min(budget, cap);

  int nd = static_cast<int>(model.paths.size());
  // Per (demand, walk): the distinct hosts, for the evaluated products.
  std::vector<std::vector<std::vector<int>>> hosts(nd);
  for (int di = 0; di < nd; ++di)
    for (const auto& p : model.paths[di]) hosts[di].push_back(distinct_nodes(p));
  const auto& requested = model.demand_nfs;

  std::map<std::string, std::vector<char>> placed;
  for (const auto& f : model.nf_order) placed[f].assign(n, 0);

  double best_obj = kInf;
  bool found = false;
  std::map<std::string, std::vector<char>> best_placed;
  std::vector<int> best_path;

  std::vector<int> pick(nd, -1);
  auto evaluate = [&]() {
    double lam = -kInf;
    for (int di = 0; di < nd; ++di) {
      double bestv = kInf;
      int bestp = -1;
      for (std::size_t p = 0; p < hosts[di].size(); ++p) {
        if (model.chained) {
          // March the walk through the placed copies; the walk counts only
          // when the chain completes in stage order along it.
          const auto& chain = requested[di];
          std::size_t stage = 0;
          for (int v : model.paths[di][p]) {
            while (stage < chain.size() && placed.at(chain[stage])[v]) ++stage;
            if (stage == chain.size()) break;
          }
          if (stage != chain.size()) continue;
        }
        double worst = -kInf;
        bool covered = true;
        for (const auto& f : requested[di]) {
          double sum = 0.0;
          int cnt = 0;
          const auto& flags = placed[f];
          for (int v : hosts[di][p])
            if (flags[v]) {
              sum += model.node_log[v];
              ++cnt;
            }
          if (cnt == 0) {
            covered = false;
            break;
          }
          worst = std::max(worst, sum);
        }
        if (!covered) continue;
        double val = worst - model.order_penalty[di];
        if (val < bestv - kTieEps) {
          bestv = val;
          bestp = static_cast<int>(p);
        }
      }
      if (bestp < 0) return;
      pick[di] = bestp;
      lam = std::max(lam, bestv);
    }
    if (!found || lam < best_obj - kTieEps) {
      found = true;
      best_obj = lam;
      best_placed = placed;
      best_path = pick;
    }
  };

  // Depth-first over hosts; per host, every subset of its placeable NFs.
  std::function<void(int, int)> walk = [&](int host, int used) {
    if (host == n) {
      evaluate();
      return;
    }
    int options = static_cast<int>(host_bits[host].size());
    for (int mask = 0; mask < (1 << options); ++mask) {
      if (mask != 0 && used + 1 > budget) continue;
      for (int b = 0; b < options; ++b)
        if (mask & (1 << b)) placed[host_bits[host][b].nf][host] = 1;
      walk(host + 1, used + (mask != 0 ? 1 : 0));
      for (int b = 0; b < options; ++b)
        if (mask & (1 << b)) placed[host_bits[host][b].nf][host] = 0;
    }
  };
  walk(0, 0);

  if (!found) {
    res.status = SolveStatus::infeasible;
    return res;
  }

  // Resolve every variable of the best leaf.
  res.status = SolveStatus::optimal;
  res.objective = best_obj;
  auto& a = res.assignment;
  a[model.vars[model.lambda].name] = best_obj;
  for (const auto& f : model.nf_order)
    for (int i = 0; i < n; ++i)
      a[model.vars[model.z_index.at({f, i})].name] = best_placed[f][i];
  for (int i = 0; i < n; ++i) {
    double h = 0.0;
    for (const auto& f : model.nf_order) h = std::max(h, double(best_placed[f][i]));
    a[model.vars[model.h_index[i]].name] = h;
  }
  std::vector<double> omegas(nd, -kInf);
  for (int di = 0; di < nd; ++di) {
    for (std::size_t p = 0; p < model.paths[di].size(); ++p)
      a[model.vars[model.x_index[di][p]].name] =
          static_cast<int>(p) == best_path[di] ? 1.0 : 0.0;
    std::set<int> on(model.paths[di][best_path[di]].begin(),
                     model.paths[di][best_path[di]].end());
    for (const auto& f : model.nf_order) {
      bool req = std::find(requested[di].begin(), requested[di].end(), f) !=
                 requested[di].end();
      double xi = 0.0;
      for (int i = 0; i < n; ++i) {
        double y = (req && best_placed[f][i] && on.count(i)) ? 1.0 : 0.0;
        a[model.vars[model.y_index.at({di, f, i})].name] = y;
        xi += y * model.node_log[i];
      }
      a[model.vars[model.xi_index.at({di, f})].name] = xi;
      if (req) omegas[di] = std::max(omegas[di], xi);
    }
    omegas[di] -= model.order_penalty[di];
  }
  if (model.chained) {
    int mark = 0;
    for (int di = 0; di < nd; ++di)
      if (omegas[di] > omegas[mark] + kTieEps) mark = di;
    for (int di = 0; di < nd; ++di) {
      a[model.vars[model.omega_index[di]].name] = omegas[di];
      a[model.vars[model.beta_index[di]].name] = di == mark ? 1.0 : 0.0;
    }
    for (const auto& ct : model.chain_tuples) {
      double live = 1.0;
      for (const auto& [f, i] : ct.members)
        if (!best_placed.at(f)[i]) {
          live = 0.0;
          break;
        }
      a[model.vars[ct.var].name] = live;
    }
  }
  for (const auto& f : model.nf_order) {
    std::set<int> nodes;
    for (int i = 0; i < n; ++i)
      if (best_placed[f][i]) nodes.insert(i);
    if (!nodes.empty()) res.deployment.placed[f] = std::move(nodes);
  }
  for (int di = 0; di < nd; ++di)
    res.routing[model.demand_ids[di]] = model.paths[di][best_path[di]];
  return res;
}

Extraction extract_solution(const MilpModel& model, const SolveResult& result,
                            const Scenario& s) {
  if (result.status != SolveStatus::optimal)
    throw ValidationError("only optimal results can be extracted");
  Extraction out;
  out.deployment = result.deployment;
  out.routing = result.routing;

  double mapped =
      candidate_objective(s, out.deployment, model.paths, model.log_mode, model.chained);
  if (std::abs(std::log(mapped) - result.objective) > 1e-9)
    throw std::logic_error(
        "internal error: model optimum does not match the recomputed product value");

  std::vector<std::vector<std::vector<int>>> pinned(s.demands.size());
  for (std::size_t di = 0; di < s.demands.size(); ++di) {
    auto it = out.routing.find(s.demands[di].id());
    if (it != out.routing.end()) pinned[di] = {it->second};
  }
  out.report = system_metrics(s, out.deployment, pinned);
  return out;
}

double candidate_objective(const Scenario& s, const Deployment& dep,
                           const std::vector<std::vector<std::vector<int>>>& paths,
                           LogMode mode, bool chained) {
  if (paths.size() != s.demands.size())
    throw ValidationError("candidate walk lists do not match the demand list");
  double worst = -kInf;
  for (std::size_t di = 0; di < s.demands.size(); ++di) {
    const Demand& d = s.demands[di];
    double bestp = kInf;
    for (const auto& p : paths[di]) {
      double val = -kInf;
      bool covered = true;
      for (const auto& f : d.nfs) {
        auto it = dep.placed.find(f);
        double prod = 1.0;
        int cnt = 0;
        if (it != dep.placed.end())
          for (int v : distinct_nodes(p))
            if (it->second.count(v)) {
              prod *= product_term(s.network.node(v).failure_prob, mode);
              ++cnt;
            }
        if (cnt == 0) {
          covered = false;
          break;
        }
        val = std::max(val, prod);
      }
      if (covered) bestp = std::min(bestp, val);
    }
    if (bestp == kInf)
      throw InfeasibleError("demand " + d.id() +
                            " has no covered candidate walk under the deployment");
    worst = std::max(worst, bestp / (chained ? order_count(d) : 1.0));
  }
  return worst;
}

}  // namespace rnfv
