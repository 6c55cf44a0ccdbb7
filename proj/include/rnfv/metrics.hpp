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

#ifndef RNFV_METRICS_HPP_
#define RNFV_METRICS_HPP_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "rnfv/netmodel.hpp"

namespace rnfv {

// Which NF copies exist: nf id -> substrate node indices hosting it.
struct Deployment {
  std::map<std::string, std::set<int>> placed;
  bool operator==(const Deployment&) const = default;
};

// Every candidate pool fully instantiated.
Deployment full_pool_deployment(const Scenario& s);

// Placement must respect the pools and per-NF count limits
// (ValidationError); every NF some demand requests must exist somewhere
// (InfeasibleError).
void validate_deployment(const Scenario& s, const Deployment& dep);

// Per-demand survivability numbers. For a routing set W and NF f, the
// failure product of f is the probability that every copy of f on a walk
// fails, minimized over the walks serving the demand; core is the worst such
// product across the demand's NFs. A chain demand divides its robustness by
// the number of visiting orders its NF set admits, reflecting that a chain
// pins one of the possible orders; order-free demands (including chains that
// only imposed an order for routing) keep the full value. rp + fp == 1 holds
// per demand by construction and is re-derived independently as a check.
struct DemandMetric {
  std::string demand_id;
  bool ordered = false;
  bool canonicalized = false;
  double orders = 1.0;                   // visiting orders charged to the demand
  std::map<std::string, double> cores;   // per-NF minimal failure product
  double core = 1.0;                     // max over NFs
  double rp = 0.0;
  double fp = 1.0;
};

struct MetricReport {
  std::vector<DemandMetric> demands;
  double system_rp = 0.0;
  double system_fp = 1.0;
};

// A walk can serve a demand when each requested NF has a deployed copy on
// it, in visiting order for chains (consecutive stages may share a node).
bool walk_feasible(const Scenario& s, const Deployment& dep, const Demand& d,
                   const std::vector<int>& walk);

// Routing set of a demand when nothing pins the routes: every service path
// of the layered graph, and for order-free demands the union over all
// visiting orders. Deduplicated substrate walks; GuardExceeded beyond
// max_paths per order.
std::vector<std::vector<int>> demand_walks(const Scenario& s, const Demand& d,
                                           int max_paths = 2000);

DemandMetric demand_metric(const Scenario& s, const Deployment& dep, const Demand& d,
                           const std::vector<std::vector<int>>& walks);

// Independent re-derivation of the failure side; used to cross-check
// rp + fp == 1 rather than defining fp as its complement.
double demand_fp(const Scenario& s, const Deployment& dep, const Demand& d,
                 const std::vector<std::vector<int>>& walks);

// System-wide report: the weakest demand defines the system. Walks may be
// pinned per demand (same indexing as s.demands); an empty inner list means
// "derive from the layered graph".
MetricReport system_metrics(const Scenario& s, const Deployment& dep,
                            const std::vector<std::vector<std::vector<int>>>& pinned = {});

// True when every demand satisfies rp + fp == 1 within tol and the system
// values are complementary.
bool verify_duality(const MetricReport& report, double tol = 1e-12);

// Exact fulfillment probability of one routed demand under independent node
// failures: enumerates alive/dead patterns of the deployed copies on the
// walk (2^n, guarded) and accumulates the probability of the patterns that
// still allow serving the demand.
double exact_reliability(const Scenario& s, const Deployment& dep, const Demand& d,
                         const std::vector<int>& walk);

}  // namespace rnfv

#endif  // RNFV_METRICS_HPP_
