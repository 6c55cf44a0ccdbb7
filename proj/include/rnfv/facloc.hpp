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

#ifndef RNFV_FACLOC_HPP_
#define RNFV_FACLOC_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rnfv/metrics.hpp"
#include "rnfv/netmodel.hpp"

namespace rnfv {

// Deployment-cost constants: the dual-fitting core is (1.11, 1.78)
// competitive, the augmentation scale 8.67 balances the two sides of the
// final guarantee at 3.27.
inline constexpr double kGreedyFacilityFactor = 1.11;
inline constexpr double kGreedyConnectionFactor = 1.78;
inline constexpr double kDefaultAugmentScale = 8.67;
inline constexpr double kSforkBound = 3.27;

double sfork_alpha(double delta = kDefaultAugmentScale);
double sfork_beta(double delta = kDefaultAugmentScale);

// Plain uncapacitated facility location instance with aggregated clients.
struct FacLocInstance {
  std::vector<double> open_cost;
  std::vector<std::vector<double>> conn;  // conn[client][facility]
};

struct FacLocSolution {
  std::vector<int> open;    // facility indices, ascending
  std::vector<int> assign;  // per client, an open facility
  double open_total = 0.0;
  double conn_total = 0.0;
  double total() const { return open_total + conn_total; }
};

// Dual-fitting greedy with opening costs scaled by delta during the growth
// phase, followed by a gain-driven augmentation on the original costs.
FacLocSolution greedy_1fl(const FacLocInstance& inst, double delta = kDefaultAugmentScale);

// Exact optimum by facility-subset enumeration; GuardExceeded past guard_bits
// facilities.
FacLocSolution brute_force_1fl(const FacLocInstance& inst, int guard_bits = 20);

// Service structure with one shared prefix and per-branch suffixes; an empty
// branch list is a plain chain.
struct Fork {
  std::vector<std::string> shared;
  std::vector<std::vector<std::string>> branches;

  std::vector<std::string> chain(int branch) const;
  bool operator==(const Fork&) const = default;
};

// Requests reference scenario demands; branch -1 means the demand uses the
// shared chain only.
struct ForkRequest {
  int demand_index = -1;
  int branch = -1;
  bool operator==(const ForkRequest&) const = default;
};

struct ForkInstance {
  const Scenario* scenario = nullptr;
  Fork fork;
  std::vector<ForkRequest> requests;
};

// Reads the fork off the scenario's ordered demands: the shared part is
// their longest common NF prefix, distinct suffixes become branches. Every
// demand must be ordered, and either all or none may continue past the
// shared part. Only demand sources matter for placement costs.
ForkInstance make_fork_instance(const Scenario& s);

// One node per level of a (sub)chain, with its connection and deployment
// cost under the scenario's cost table.
struct LevelPath {
  std::vector<int> nodes;
  double conn = 0.0;
  double open = 0.0;
  bool operator==(const LevelPath&) const = default;
};

struct ForkSolution {
  Deployment deployment;
  std::vector<std::vector<int>> request_paths;  // full level sequence per request
  double deploy_cost = 0.0;
  double conn_cost = 0.0;
  double total() const { return deploy_cost + conn_cost; }
};

// Demands bundled on their pre-chosen branch entry node.
struct ReducedClient {
  int branch = -1;
  int attach = -1;                  // substrate node entering the branch
  std::vector<int> request_indices;
  LevelPath q;                      // branch tail serving the bundle
};

struct ReducedInstance {
  FacLocInstance fl;
  std::vector<LevelPath> fac_paths;  // facility -> shared-level path
  std::vector<ReducedClient> clients;
  // (sharing degree, head node) -> facility index; degrees with identical
  // best paths share a facility.
  std::map<std::pair<int, int>, int> candidate_index;
  double alpha = 0.0;
  double beta = 0.0;
};

// Two-step collapse to one-level facility location: per branch and entry
// node the cheapest branch tail is fixed, demands are bundled on their
// cheapest entry, and shared-path facilities are generated per (sharing
// degree, head node) under the alpha/beta-weighted objective.
ReducedInstance two_step_reduction(const ForkInstance& fork, double alpha, double beta);

// Opens every node on the chosen shared paths and branch tails and routes
// each request through its bundle's facility. Never costs more than the flat
// solution it came from, since shared nodes are counted once.
ForkSolution lift_solution(const ForkInstance& fork, const ReducedInstance& red,
                           const FacLocSolution& flat);

// Merges shared-path prefixes that meet at a level node so the shared levels
// form a forest. A merge is applied only when it does not increase the total
// cost, so the result never costs more than the input.
ForkSolution enforce_forest(const ForkInstance& fork, const ForkSolution& sol);

// Full pipeline: reduce, solve flat, lift, enforce the forest shape.
ForkSolution solve_sfork(const ForkInstance& fork, double delta = kDefaultAugmentScale);

// Exact optimum: enumerates per-NF deployment subsets and routes each
// request optimally inside each deployment. GuardExceeded past guard
// combinations.
ForkSolution brute_force_sfork(const ForkInstance& fork, std::uint64_t guard = 2000000);

// Recomputes both cost components of a solution from its request paths.
ForkSolution evaluate_fork_solution(const ForkInstance& fork,
                                    const std::vector<std::vector<int>>& request_paths);

struct LemmaChecks {
  bool lift_dominated = false;     // lifted total <= flat total
  bool merge_monotone = false;     // forest pass lowered neither cost component sum
  bool candidate_bound = false;    // constructed flat solution within the scaled budget
  double ratio = 0.0;              // solve_sfork total / brute optimum total
};

LemmaChecks check_lemma_inequalities(const ForkInstance& fork,
                                     double delta = kDefaultAugmentScale);

}  // namespace rnfv

#endif  // RNFV_FACLOC_HPP_
