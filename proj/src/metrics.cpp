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

#include "rnfv/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "rnfv/auxnet.hpp"
#include "rnfv/errors.hpp"
#include "rnfv/pathfind.hpp"

namespace rnfv {

Deployment full_pool_deployment(const Scenario& s) {
  Deployment dep;
  for (const auto& [nf, pool] : s.catalog.pool)
    dep.placed[nf] = std::set<int>(pool.begin(), pool.end());
  return dep;
}

void validate_deployment(const Scenario& s, const Deployment& dep) {
  for (const auto& [nf, nodes] : dep.placed) {
    if (!s.catalog.nfs.count(nf))
      throw ValidationError("deployment places unknown NF '" + nf + "'");
    const auto& pool = s.catalog.pool.at(nf);
    for (int v : nodes)
      if (!std::binary_search(pool.begin(), pool.end(), v))
        throw ValidationError("NF '" + nf + "' placed on node '" + s.network.node(v).id +
                              "' outside its candidate pool");
    auto lim = s.catalog.limit.find(nf);
    if (lim != s.catalog.limit.end() && static_cast<int>(nodes.size()) > lim->second)
      throw ValidationError("NF '" + nf + "' uses " + std::to_string(nodes.size()) +
                            " copies, limit is " + std::to_string(lim->second));
  }
  for (const auto& d : s.demands)
    for (const auto& f : d.nfs) {
      auto it = dep.placed.find(f);
      if (it == dep.placed.end() || it->second.empty())
        throw InfeasibleError("demand " + d.id() + " needs NF '" + f +
                              "' but no copy is deployed");
    }
}

namespace {

double factorial(int n) {
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::set<int> walk_nodes(const std::vector<int>& walk) {
  return std::set<int>(walk.begin(), walk.end());
}

std::set<int> copies_on_walk(const Deployment& dep, const std::string& nf,
                             const std::set<int>& nodes) {
  std::set<int> out;
  auto it = dep.placed.find(nf);
  if (it == dep.placed.end()) return out;
  for (int v : it->second)
    if (nodes.count(v)) out.insert(v);
  return out;
}

// Probability that every listed copy host fails at once.
double all_fail_product(const Scenario& s, const std::set<int>& hosts) {
  double p = 1.0;
  for (int v : hosts) p *= s.network.node(v).failure_prob;
  return p;
}

double orders_of(const Demand& d) {
  return (d.ordered && !d.canonicalized) ? factorial(static_cast<int>(d.nfs.size()))
                                         : 1.0;
}

}  // namespace

bool walk_feasible(const Scenario& s, const Deployment& dep, const Demand& d,
                   const std::vector<int>& walk) {
  (void)s;
  auto nodes = walk_nodes(walk);
  if (d.ordered && !d.canonicalized) {
    // March along the walk advancing through the chain; a node hosting two
    // consecutive stages serves both without moving.
    std::size_t stage = 0;
    for (int v : walk) {
      while (stage < d.nfs.size()) {
        auto it = dep.placed.find(d.nfs[stage]);
        if (it != dep.placed.end() && it->second.count(v))
          ++stage;
        else
          break;
      }
      if (stage == d.nfs.size()) return true;
    }
    return stage == d.nfs.size();
  }
  for (const auto& f : d.nfs)
    if (copies_on_walk(dep, f, nodes).empty()) return false;
  return true;
}

std::vector<std::vector<int>> demand_walks(const Scenario& s, const Demand& d,
                                           int max_paths) {
  std::vector<std::vector<int>> out;
  std::set<std::vector<int>> seen;
  auto add_for_chain = [&](const Demand& chain) {
    AuxNetwork aux = build_sfc_aux(s, chain);
    for (const auto& p : enumerate_aux_paths(aux, max_paths))
      if (seen.insert(p.physical).second) out.push_back(p.physical);
  };
  if (d.ordered) {
    add_for_chain(d);
    return out;
  }
  std::vector<std::string> order = d.nfs;
  std::sort(order.begin(), order.end());
  do {
    Demand imposed = d;
    imposed.nfs = order;
    imposed.ordered = true;
    imposed.canonicalized = true;
    add_for_chain(imposed);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

DemandMetric demand_metric(const Scenario& s, const Deployment& dep, const Demand& d,
                           const std::vector<std::vector<int>>& walks) {
  DemandMetric m;
  m.demand_id = d.id();
  m.ordered = d.ordered;
  m.canonicalized = d.canonicalized;
  m.orders = orders_of(d);
  bool any_feasible = false;
  for (const auto& f : d.nfs) {
    double best = 1.0;
    bool f_feasible = false;
    for (const auto& w : walks) {
      if (!walk_feasible(s, dep, d, w)) continue;
      f_feasible = true;
      best = std::min(best, all_fail_product(s, copies_on_walk(dep, f, walk_nodes(w))));
    }
    any_feasible = any_feasible || f_feasible;
    m.cores[f] = f_feasible ? best : 1.0;
  }
  m.core = 0.0;
  for (const auto& [f, c] : m.cores) m.core = std::max(m.core, c);
  if (!any_feasible) m.core = 1.0;
  m.rp = (1.0 - m.core) / m.orders;
  m.fp = demand_fp(s, dep, d, walks);
  return m;
}

double demand_fp(const Scenario& s, const Deployment& dep, const Demand& d,
                 const std::vector<std::vector<int>>& walks) {
  // Walk-major recomputation of the core, deliberately not sharing code with
  // demand_metric so the complementarity check exercises two derivations.
  std::map<std::string, double> per_nf;
  for (const auto& f : d.nfs) per_nf[f] = 1.0;
  bool any = false;
  for (const auto& w : walks) {
    if (!walk_feasible(s, dep, d, w)) continue;
    any = true;
    auto nodes = walk_nodes(w);
    for (const auto& f : d.nfs) {
      double prod = 1.0;
      for (int v : nodes) {
        auto it = dep.placed.find(f);
        if (it != dep.placed.end() && it->second.count(v))
          prod *= s.network.node(v).failure_prob;
      }
      per_nf[f] = std::min(per_nf[f], prod);
    }
  }
  double core = 0.0;
  for (const auto& [f, c] : per_nf) core = std::max(core, c);
  if (!any) core = 1.0;
  double k = orders_of(d);
  return (k - 1.0 + core) / k;
}

MetricReport system_metrics(const Scenario& s, const Deployment& dep,
                            const std::vector<std::vector<std::vector<int>>>& pinned) {
  if (!pinned.empty() && pinned.size() != s.demands.size())
    throw ValidationError("pinned routing list does not match the demand list");
  MetricReport rep;
  rep.system_rp = 1.0;
  rep.system_fp = 0.0;
  for (std::size_t i = 0; i < s.demands.size(); ++i) {
    std::vector<std::vector<int>> walks;
    if (!pinned.empty() && !pinned[i].empty())
      walks = pinned[i];
    else
      walks = demand_walks(s, s.demands[i]);
    DemandMetric m = demand_metric(s, dep, s.demands[i], walks);
    rep.system_rp = std::min(rep.system_rp, m.rp);
    rep.system_fp = std::max(rep.system_fp, m.fp);
    rep.demands.push_back(std::move(m));
  }
  return rep;
}

bool verify_duality(const MetricReport& report, double tol) {
  for (const auto& m : report.demands)
    if (std::abs(m.rp + m.fp - 1.0) > tol) return false;
  return std::abs(report.system_rp + report.system_fp - 1.0) <= tol;
}

double exact_reliability(const Scenario& s, const Deployment& dep, const Demand& d,
                         const std::vector<int>& walk) {
  auto nodes = walk_nodes(walk);
  std::vector<int> relevant;
  {
    std::set<int> rel;
    for (const auto& f : d.nfs)
      for (int v : copies_on_walk(dep, f, nodes)) rel.insert(v);
    relevant.assign(rel.begin(), rel.end());
  }
  if (relevant.size() > 24)
    throw GuardExceeded("reliability enumeration over " +
                        std::to_string(relevant.size()) + " hosts is too large");
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (1ull << relevant.size()); ++mask) {
    double prob = 1.0;
    std::set<int> alive;
    for (std::size_t i = 0; i < relevant.size(); ++i) {
      double rho = s.network.node(relevant[i]).failure_prob;
      if (mask & (1ull << i)) {
        alive.insert(relevant[i]);
        prob *= 1.0 - rho;
      } else {
        prob *= rho;
      }
    }
    if (prob == 0.0) continue;
    Deployment alive_dep;
    for (const auto& [f, hosts] : dep.placed) {
      std::set<int> still;
      for (int v : hosts)
        if (alive.count(v) && nodes.count(v)) still.insert(v);
      alive_dep.placed[f] = still;
    }
    if (walk_feasible(s, alive_dep, d, walk)) total += prob;
  }
  return total;
}

}  // namespace rnfv
