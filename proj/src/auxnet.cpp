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

#include "rnfv/auxnet.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>

#include "rnfv/errors.hpp"

namespace rnfv {

LogicalGraph LogicalGraph::chain(const std::vector<std::string>& nfs) {
  LogicalGraph g;
  g.nfs = nfs;
  for (int i = 0; i + 1 < static_cast<int>(nfs.size()); ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

int AuxNetwork::add_node(AuxNode n) {
  nodes.push_back(std::move(n));
  out.emplace_back();
  in.emplace_back();
  return static_cast<int>(nodes.size()) - 1;
}

void AuxNetwork::add_arc(AuxArc a) {
  int idx = static_cast<int>(arcs.size());
  out[a.from].push_back(idx);
  in[a.to].push_back(idx);
  arcs.push_back(std::move(a));
}

int AuxNetwork::find(int phys, const std::string& nf, int level) const {
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    if (nodes[i].phys == phys && nodes[i].nf == nf && nodes[i].level == level) return i;
  return -1;
}

std::string AuxNetwork::label(int aux_index) const {
  const AuxNode& n = nodes[aux_index];
  const std::string& id = origin->network.node(n.phys).id;
  return n.nf.empty() ? id : id + "@" + n.nf;
}

std::vector<std::pair<int, std::string>> aux_copies(const Scenario& s) {
  std::vector<std::pair<int, std::string>> out;
  for (const auto& nf : s.catalog.nfs)
    for (int v : s.catalog.pool.at(nf)) out.emplace_back(v, nf);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  });
  return out;
}

PathTree shortest_path_tree(const PhysicalNetwork& net, int src) {
  int n = net.node_count();
  PathTree t;
  t.src = src;
  t.dist.assign(n, std::numeric_limits<double>::infinity());
  t.parent.assign(n, -1);
  t.dist[src] = 0.0;
  // (distance, node) min-heap; the node index breaks distance ties so the
  // settle order is reproducible.
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, src});
  std::vector<char> done(n, 0);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (const auto& [v, w] : net.neighbors(u)) {
      if (done[v]) continue;
      double nd = d + w;
      if (nd < t.dist[v] || (nd == t.dist[v] && t.parent[v] > u)) {
        t.dist[v] = nd;
        t.parent[v] = u;
        pq.push({nd, v});
      }
    }
  }
  return t;
}

std::vector<int> tree_path(const PathTree& tree, int dst) {
  if (tree.dist[dst] == std::numeric_limits<double>::infinity())
    throw InfeasibleError("no physical route to requested node");
  std::vector<int> path;
  for (int v = dst; v != -1; v = tree.parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

// Shortest-path trees from every node that can appear as an arc tail,
// computed once per build.
class TreeCache {
 public:
  explicit TreeCache(const PhysicalNetwork& net) : net_(net), trees_(net.node_count()) {}

  const PathTree& rooted_at(int src) {
    if (trees_[src].src < 0) trees_[src] = shortest_path_tree(net_, src);
    return trees_[src];
  }

  AuxArc make_arc(int from, int to, int phys_from, int phys_to) {
    const PathTree& t = rooted_at(phys_from);
    AuxArc a;
    a.from = from;
    a.to = to;
    a.weight = t.dist[phys_to];
    a.realization = tree_path(t, phys_to);
    return a;
  }

 private:
  const PhysicalNetwork& net_;
  std::vector<PathTree> trees_;
};

void require_ordered_shape(const Scenario& s, const Demand& d) {
  if (s.network.index_of(d.source) < 0 || s.network.index_of(d.target) < 0)
    throw ValidationError("demand " + d.id() + " references nodes outside the scenario");
  for (const auto& f : d.nfs)
    if (!s.catalog.pool.count(f) || s.catalog.pool.at(f).empty())
      throw ValidationError("demand " + d.id() + " requests NF '" + f +
                            "' with an empty candidate pool");
}

}  // namespace

AuxNetwork build_sfc_aux(const Scenario& s, const Demand& d) {
  require_ordered_shape(s, d);
  if (!d.ordered)
    throw ValidationError("demand " + d.id() +
                          " is order-free; impose an order before building a chain graph");
  AuxNetwork aux;
  aux.kind = AuxKind::sfc;
  aux.origin = &s;
  int r = static_cast<int>(d.nfs.size());
  aux.chain_len = r;
  int s_phys = s.network.index_of(d.source);
  int t_phys = s.network.index_of(d.target);
  aux.source = aux.add_node({s_phys, "", 0});
  std::vector<std::vector<int>> layer(r);  // aux indices per stage
  for (int i = 0; i < r; ++i)
    for (int v : s.catalog.pool.at(d.nfs[i]))
      layer[i].push_back(aux.add_node({v, d.nfs[i], i + 1}));
  aux.target = aux.add_node({t_phys, "", r + 1});

  TreeCache cache(s.network);
  for (int c : layer[0])
    aux.add_arc(cache.make_arc(aux.source, c, s_phys, aux.nodes[c].phys));
  for (int i = 0; i + 1 < r; ++i)
    for (int c : layer[i])
      for (int nxt : layer[i + 1]) {
        if (aux.nodes[c].phys == aux.nodes[nxt].phys) continue;
        aux.add_arc(cache.make_arc(c, nxt, aux.nodes[c].phys, aux.nodes[nxt].phys));
      }
  for (int c : layer[r - 1])
    aux.add_arc(cache.make_arc(c, aux.target, aux.nodes[c].phys, t_phys));
  return aux;
}

AuxNetwork build_nonchained_aux(const Scenario& s, const Demand& d) {
  require_ordered_shape(s, d);
  AuxNetwork aux;
  aux.kind = AuxKind::nonchained;
  aux.origin = &s;
  aux.chain_len = static_cast<int>(d.nfs.size());
  int s_phys = s.network.index_of(d.source);
  int t_phys = s.network.index_of(d.target);
  aux.source = aux.add_node({s_phys, "", 0});
  std::vector<int> copies;
  for (const auto& f : d.nfs)
    for (int v : s.catalog.pool.at(f)) copies.push_back(aux.add_node({v, f, 1}));
  aux.target = aux.add_node({t_phys, "", 2});

  TreeCache cache(s.network);
  for (int c : copies) aux.add_arc(cache.make_arc(aux.source, c, s_phys, aux.nodes[c].phys));
  for (int a : copies)
    for (int b : copies) {
      if (a == b || aux.nodes[a].nf == aux.nodes[b].nf) continue;
      if (aux.nodes[a].phys == aux.nodes[b].phys) continue;
      aux.add_arc(cache.make_arc(a, b, aux.nodes[a].phys, aux.nodes[b].phys));
    }
  for (int c : copies) aux.add_arc(cache.make_arc(c, aux.target, aux.nodes[c].phys, t_phys));
  return aux;
}

std::string dump_aux(const AuxNetwork& aux) {
  std::ostringstream out;
  out << (aux.kind == AuxKind::sfc ? "chain" : "order-free") << " graph, "
      << aux.nodes.size() << " nodes, " << aux.arcs.size() << " arcs\n";
  for (int i = 0; i < static_cast<int>(aux.nodes.size()); ++i) {
    out << "node " << i << " " << aux.label(i);
    if (aux.nodes[i].nf.empty())
      out << (i == aux.source ? " (source)" : " (target)");
    else
      out << " level " << aux.nodes[i].level;
    out << "\n";
  }
  for (const auto& a : aux.arcs) {
    out << "arc " << aux.label(a.from) << " -> " << aux.label(a.to) << " weight "
        << a.weight << " via";
    for (int v : a.realization) out << " " << aux.origin->network.node(v).id;
    out << "\n";
  }
  return out.str();
}

}  // namespace rnfv
