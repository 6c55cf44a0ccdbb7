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

#ifndef RNFV_AUXNET_HPP_
#define RNFV_AUXNET_HPP_

#include <string>
#include <utility>
#include <vector>

#include "rnfv/netmodel.hpp"

namespace rnfv {

// Service structure over NF types: vertices are NF names, directed edges give
// the required processing order. chain() builds the common linear case.
struct LogicalGraph {
  std::vector<std::string> nfs;
  std::vector<std::pair<int, int>> edges;  // indices into nfs

  static LogicalGraph chain(const std::vector<std::string>& nfs);
  bool operator==(const LogicalGraph&) const = default;
};

enum class AuxKind { sfc, nonchained };

// One vertex of the layered service graph: a candidate copy of an NF pinned
// to a substrate node, or a demand endpoint (empty nf). For AuxKind::sfc,
// level 0 is the source, levels 1..r the chain stages, r+1 the target.
struct AuxNode {
  int phys = -1;
  std::string nf;
  int level = -1;
  bool operator==(const AuxNode&) const = default;
};

// Directed arc. realization lists the substrate nodes of the shortest
// physical route from the tail's node to the head's node, endpoints included,
// so a service path can be expanded to the walk it induces on the substrate.
struct AuxArc {
  int from = -1;
  int to = -1;
  double weight = 0.0;
  std::vector<int> realization;
  bool operator==(const AuxArc&) const = default;
};

struct AuxNetwork {
  AuxKind kind = AuxKind::sfc;
  int chain_len = 0;  // number of NF stages r
  std::vector<AuxNode> nodes;
  std::vector<AuxArc> arcs;
  std::vector<std::vector<int>> out;  // arc indices by tail
  std::vector<std::vector<int>> in;   // arc indices by head
  int source = -1;
  int target = -1;
  const Scenario* origin = nullptr;

  int add_node(AuxNode n);
  void add_arc(AuxArc a);
  // -1 when absent.
  int find(int phys, const std::string& nf, int level) const;
  std::string label(int aux_index) const;
};

// All candidate copies of the scenario, one per (substrate node, supported
// NF), ordered by NF name then node index.
std::vector<std::pair<int, std::string>> aux_copies(const Scenario& s);

// Layered graph for an ordered chain: source layer, one layer of candidate
// copies per stage, target layer. Consecutive stages connect every copy pair
// on distinct substrate nodes; endpoint arcs attach freely (a copy hosted on
// the endpoint itself gets a zero-weight arc). Arc weights are shortest
// physical distances; ties resolve toward the earlier-declared node so two
// builds of the same scenario are byte-identical.
AuxNetwork build_sfc_aux(const Scenario& s, const Demand& d);

// Order-free variant: one copy per (node, required NF), arcs in both
// directions between copies of different NFs on distinct nodes, the source
// feeding every copy and every copy feeding the target. Visiting orders are
// explored by the metric layer, which runs one chain per permutation.
AuxNetwork build_nonchained_aux(const Scenario& s, const Demand& d);

// Human-readable listing of nodes and arcs, stable across runs.
std::string dump_aux(const AuxNetwork& aux);

// Shortest-path tree on the substrate from src: distances, parents and the
// node sequence src..dst recoverable via tree_path. Equal-length routes
// resolve toward the earlier-declared parent.
struct PathTree {
  std::vector<double> dist;
  std::vector<int> parent;
  int src = -1;
};
PathTree shortest_path_tree(const PhysicalNetwork& net, int src);
std::vector<int> tree_path(const PathTree& tree, int dst);

}  // namespace rnfv

#endif  // RNFV_AUXNET_HPP_
