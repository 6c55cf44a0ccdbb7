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

#ifndef RNFV_PATHFIND_HPP_
#define RNFV_PATHFIND_HPP_

#include <string>
#include <vector>

#include "rnfv/auxnet.hpp"
#include "rnfv/netmodel.hpp"

namespace rnfv {

// A resolved service path: the layered-graph vertices it visits and the
// substrate walk obtained by splicing the arc realizations (transit nodes may
// repeat, chosen copies sit on distinct nodes). bottleneck is the smallest
// copy capacity along it, +inf when no copy is visited.
struct ServicePath {
  std::vector<int> aux_nodes;
  std::vector<int> physical;
  double total_weight = 0.0;
  double bottleneck = 0.0;

  bool operator==(const ServicePath&) const = default;
};

// Plain substrate path with its length.
struct WeightedPath {
  std::vector<int> nodes;
  double weight = 0.0;
  bool operator==(const WeightedPath&) const = default;
};

// Survivability-oriented node capacity: ln of one plus the survival
// probability, so a widest path prefers reliable hosts and capacities add up
// in log space. Demand endpoints are treated as unbounded.
double node_capacity(double failure_prob);

// Minimum-length service path through the layered graph. Among equal-length
// paths the lexicographically smallest vertex sequence wins, making results
// reproducible. Throws InfeasibleError when the target is unreachable.
ServicePath sfc_shortest_path(const AuxNetwork& aux);

// Maximum-bottleneck service path: the chosen copies maximize the smallest
// capacity; among those, length is minimized, then the lexicographically
// smallest sequence wins.
ServicePath robust_sfc_path(const AuxNetwork& aux);

// Expands an explicit layered-graph vertex sequence into a ServicePath,
// validating that each consecutive pair is an arc.
ServicePath make_service_path(const AuxNetwork& aux, const std::vector<int>& seq);

// Imposes the lexicographic NF order on an order-free demand so chain
// algorithms apply; the result is marked canonicalized and the order
// uncertainty discount no longer applies to it. Ordered demands pass through.
Demand canonicalize_nonchained(const Demand& d);

// K shortest loopless substrate paths between two nodes, ordered by length
// and then by vertex sequence. Returns fewer when the graph has fewer.
std::vector<WeightedPath> k_shortest_candidate_paths(const PhysicalNetwork& net, int s,
                                                     int t, int k);

// K shortest loopless source-target paths of the layered graph, same order.
std::vector<ServicePath> k_shortest_aux_paths(const AuxNetwork& aux, int k);

// Exhaustive loopless path listings used as cross-checks; they throw
// GuardExceeded beyond max_paths.
std::vector<WeightedPath> enumerate_phys_paths(const PhysicalNetwork& net, int s, int t,
                                               int max_paths = 2000);
std::vector<ServicePath> enumerate_aux_paths(const AuxNetwork& aux, int max_paths = 2000);

}  // namespace rnfv

#endif  // RNFV_PATHFIND_HPP_
