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

#ifndef RNFV_NETMODEL_HPP
#define RNFV_NETMODEL_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rnfv {

// A substrate node. capabilities lists the NF types this node may host; a node
// with at least one capability is "NF-enabled" and owns a failure probability.
struct NodeRecord {
  std::string id;
  double failure_prob = 0.0;
  std::set<std::string> capabilities;
  bool operator==(const NodeRecord&) const = default;
};

struct Edge {
  int u = -1;
  int v = -1;
  double weight = 1.0;
  bool operator==(const Edge&) const = default;
};

// Undirected substrate network. Nodes are addressed by dense index internally;
// string ids appear in files and CLI output. Immutable once built.
class PhysicalNetwork {
 public:
  int add_node(NodeRecord rec);  // returns the new index
  void add_edge(int u, int v, double weight);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const NodeRecord& node(int i) const { return nodes_[i]; }
  NodeRecord& node_mut(int i) { return nodes_[i]; }
  const std::vector<NodeRecord>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  // -1 when the id is unknown.
  int index_of(const std::string& id) const;
  bool has_edge(int u, int v) const;
  const std::vector<std::pair<int, double>>& neighbors(int i) const { return adj_[i]; }

  bool connected() const;
  bool two_connected() const;

  bool operator==(const PhysicalNetwork& o) const {
    return nodes_ == o.nodes_ && edges_ == o.edges_;
  }

 private:
  std::vector<NodeRecord> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::map<std::string, int> index_;
};

// One service request. ordered=true means the NFs form a chain that must be
// visited in sequence; ordered=false means any visiting order fulfills it.
// canonicalized marks a non-chained demand that was given an imposed order for
// path optimization; the order-uncertainty discount never applies to those.
struct Demand {
  std::string source;
  std::string target;
  bool ordered = false;
  std::vector<std::string> nfs;
  bool canonicalized = false;

  std::string id() const { return source + "-" + target; }
  bool operator==(const Demand&) const = default;
};

// NF type registry: per-NF candidate pools (derived from node capabilities),
// deployment count limits, and per-copy deployment costs (default 1).
struct NfCatalog {
  std::set<std::string> nfs;
  std::map<std::string, std::vector<int>> pool;  // nf -> sorted node indices
  std::map<std::string, int> limit;
  std::map<std::pair<std::string, std::string>, double> deploy_cost;  // (nf, node id)

  double cost(const std::string& nf, const std::string& node_id) const {
    auto it = deploy_cost.find({nf, node_id});
    return it == deploy_cost.end() ? 1.0 : it->second;
  }
  bool operator==(const NfCatalog&) const = default;
};

struct SamplingSpec {
  double mean = 0.25;
  double variance = 0.001;
  int samples = 1;
  std::uint64_t seed = 1;
  bool operator==(const SamplingSpec&) const = default;
};

struct Scenario {
  PhysicalNetwork network;
  std::vector<Demand> demands;
  NfCatalog catalog;
  SamplingSpec sampling;
  std::vector<std::string> warnings;  // non-fatal validation findings

  bool operator==(const Scenario& o) const {
    return network == o.network && demands == o.demands && catalog == o.catalog &&
           sampling == o.sampling;
  }
};

// Parses the line-oriented scenario format (see README for the grammar).
// Throws ParseError / ValidationError. The returned scenario is fully
// validated; warnings (e.g. "not 2-connected") are recorded on it.
Scenario parse_scenario(const std::string& text);

// Inverse of parse_scenario up to comments and blank lines:
// parse(serialize(s)) == s.
std::string serialize_scenario(const Scenario& s);

Scenario load_scenario_file(const std::string& path);

// Re-derives catalog pools from capabilities and checks every invariant.
// Fills s.warnings; throws ValidationError on hard violations.
void validate_scenario(Scenario& s);

// "nsf" (14 nodes / 21 links) or "coronet" (75 nodes / 99 links).
PhysicalNetwork builtin_topology(const std::string& name);

// Quantile of the node-failure distribution with the given moments at u in
// (0,1): Beta when the moments admit one, truncated Gaussian otherwise,
// degenerate point mass in the variance->0 limit. Monotone in mean for fixed
// u, which sweep experiments rely on for common-random-number coupling.
double failure_quantile(double mean, double variance, double u);

// Returns a copy of net with every NF-enabled node's failure probability
// replaced by an independent seeded draw (clamped to [0,1]).
PhysicalNetwork sample_failure_probs(const PhysicalNetwork& net, double mean,
                                     double variance, std::uint64_t seed);

}  // namespace rnfv

#endif  // RNFV_NETMODEL_HPP
