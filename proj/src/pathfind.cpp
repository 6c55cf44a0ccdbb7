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

#include "rnfv/pathfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <set>

#include "rnfv/errors.hpp"

namespace rnfv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieEps = 1e-9;

// Directed view shared by the chain graph and the (symmetrized) substrate.
struct Digraph {
  struct Arc {
    int to;
    double w;
    int id;
  };
  int n = 0;
  int arc_count = 0;
  std::vector<std::vector<Arc>> out;
};

Digraph from_phys(const PhysicalNetwork& net) {
  Digraph g;
  g.n = net.node_count();
  g.out.resize(g.n);
  int id = 0;
  for (const auto& e : net.edges()) {
    g.out[e.u].push_back({e.v, e.weight, id++});
    g.out[e.v].push_back({e.u, e.weight, id++});
  }
  g.arc_count = id;
  for (auto& lst : g.out)
    std::sort(lst.begin(), lst.end(),
              [](const Digraph::Arc& a, const Digraph::Arc& b) { return a.to < b.to; });
  return g;
}

Digraph from_aux(const AuxNetwork& aux, bool reversed = false) {
  Digraph g;
  g.n = static_cast<int>(aux.nodes.size());
  g.out.resize(g.n);
  for (int i = 0; i < static_cast<int>(aux.arcs.size()); ++i) {
    const AuxArc& a = aux.arcs[i];
    if (reversed)
      g.out[a.to].push_back({a.from, a.weight, i});
    else
      g.out[a.from].push_back({a.to, a.weight, i});
  }
  g.arc_count = static_cast<int>(aux.arcs.size());
  for (auto& lst : g.out)
    std::sort(lst.begin(), lst.end(),
              [](const Digraph::Arc& a, const Digraph::Arc& b) { return a.to < b.to; });
  return g;
}

std::vector<double> dijkstra_dist(const Digraph& g, int s) {
  std::vector<double> dist(g.n, kInf);
  dist[s] = 0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0, s});
  std::vector<char> done(g.n, 0);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (const auto& a : g.out[u])
      if (!done[a.to] && d + a.w < dist[a.to]) {
        dist[a.to] = d + a.w;
        pq.push({dist[a.to], a.to});
      }
  }
  return dist;
}

// Shortest path under node and arc bans; parent ties resolve toward the
// smaller predecessor index so repeated runs agree.
std::optional<WeightedPath> filtered_shortest(const Digraph& g, int s, int t,
                                              const std::vector<char>& banned_node,
                                              const std::vector<char>& banned_arc) {
  std::vector<double> dist(g.n, kInf);
  std::vector<int> parent(g.n, -1);
  std::vector<char> done(g.n, 0);
  if (banned_node[s] || banned_node[t]) return std::nullopt;
  dist[s] = 0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0, s});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (const auto& a : g.out[u]) {
      if (banned_arc[a.id] || banned_node[a.to] || done[a.to]) continue;
      double nd = d + a.w;
      if (nd < dist[a.to] || (nd == dist[a.to] && parent[a.to] > u)) {
        dist[a.to] = nd;
        parent[a.to] = u;
        pq.push({nd, a.to});
      }
    }
  }
  if (dist[t] == kInf) return std::nullopt;
  WeightedPath p;
  p.weight = dist[t];
  for (int v = t; v != -1; v = parent[v]) p.nodes.push_back(v);
  std::reverse(p.nodes.begin(), p.nodes.end());
  return p;
}

double weight_of(const Digraph& g, const std::vector<int>& seq) {
  double w = 0;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    bool found = false;
    for (const auto& a : g.out[seq[i]])
      if (a.to == seq[i + 1]) {
        w += a.w;
        found = true;
        break;
      }
    if (!found) throw ValidationError("path step without a connecting arc");
  }
  return w;
}

// Lexicographically smallest vertex sequence among minimum-length s-t paths
// restricted to allowed nodes. Greedy over arcs certified by forward and
// backward distance labels.
std::vector<int> lex_min_shortest(const Digraph& fwd, const Digraph& rev, int s, int t,
                                  const std::vector<char>& allowed) {
  Digraph f = fwd;  // prune disallowed nodes by clearing their arcs
  for (int u = 0; u < f.n; ++u) {
    if (!allowed[u]) {
      f.out[u].clear();
      continue;
    }
    std::erase_if(f.out[u], [&](const Digraph::Arc& a) { return !allowed[a.to]; });
  }
  Digraph r = rev;
  for (int u = 0; u < r.n; ++u) {
    if (!allowed[u]) {
      r.out[u].clear();
      continue;
    }
    std::erase_if(r.out[u], [&](const Digraph::Arc& a) { return !allowed[a.to]; });
  }
  if (!allowed[s] || !allowed[t]) throw InfeasibleError("service endpoints unusable");
  auto ds = dijkstra_dist(f, s);
  auto dt = dijkstra_dist(r, t);
  if (ds[t] == kInf) throw InfeasibleError("no feasible service path");
  double total = ds[t];
  std::vector<int> path{s};
  int u = s;
  while (u != t) {
    int best = -1;
    for (const auto& a : f.out[u]) {
      // The arc stays on some optimum iff the labels certify it.
      if (ds[u] + a.w + dt[a.to] <= total + kTieEps &&
          std::abs(ds[u] + a.w - ds[a.to]) <= kTieEps) {
        if (best == -1 || a.to < best) best = a.to;
      }
    }
    if (best == -1) throw ValidationError("shortest-path reconstruction lost the trail");
    path.push_back(best);
    u = best;
  }
  return path;
}

std::vector<WeightedPath> yen(const Digraph& g, int s, int t, int k) {
  std::vector<WeightedPath> result;
  if (k <= 0) return result;
  std::vector<char> no_nodes(g.n, 0), no_arcs(g.arc_count, 0);
  auto first = filtered_shortest(g, s, t, no_nodes, no_arcs);
  if (!first) return result;
  result.push_back(*first);

  auto cmp = [](const WeightedPath& a, const WeightedPath& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.nodes < b.nodes;
  };
  std::set<WeightedPath, decltype(cmp)> candidates(cmp);
  std::set<std::vector<int>> known{first->nodes};

  while (static_cast<int>(result.size()) < k) {
    const WeightedPath& prev = result.back();
    for (std::size_t j = 0; j + 1 < prev.nodes.size(); ++j) {
      int spur = prev.nodes[j];
      std::vector<char> banned_node(g.n, 0), banned_arc(g.arc_count, 0);
      for (const auto& p : result) {
        if (p.nodes.size() <= j) continue;
        if (!std::equal(p.nodes.begin(), p.nodes.begin() + j + 1, prev.nodes.begin()))
          continue;
        for (const auto& a : g.out[p.nodes[j]])
          if (a.to == p.nodes[j + 1]) banned_arc[a.id] = 1;
      }
      for (std::size_t i = 0; i < j; ++i) banned_node[prev.nodes[i]] = 1;
      auto sp = filtered_shortest(g, spur, t, banned_node, banned_arc);
      if (!sp) continue;
      WeightedPath full;
      full.nodes.assign(prev.nodes.begin(), prev.nodes.begin() + j);
      full.nodes.insert(full.nodes.end(), sp->nodes.begin(), sp->nodes.end());
      full.weight = weight_of(g, full.nodes);
      if (known.insert(full.nodes).second) candidates.insert(std::move(full));
    }
    if (candidates.empty()) break;
    result.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  std::stable_sort(result.begin(), result.end(), cmp);
  return result;
}

}  // namespace

double node_capacity(double failure_prob) { return std::log(2.0 - failure_prob); }

namespace {

double capacity_of(const AuxNetwork& aux, int idx) {
  const AuxNode& n = aux.nodes[idx];
  if (n.nf.empty()) return kInf;
  return node_capacity(aux.origin->network.node(n.phys).failure_prob);
}

void require_chain(const AuxNetwork& aux) {
  if (aux.kind != AuxKind::sfc)
    throw ValidationError(
        "chain path search needs a layered chain graph; canonicalize order-free "
        "demands first");
}

}  // namespace

ServicePath make_service_path(const AuxNetwork& aux, const std::vector<int>& seq) {
  if (seq.empty()) throw ValidationError("empty service path");
  ServicePath p;
  p.aux_nodes = seq;
  p.bottleneck = kInf;
  p.physical.push_back(aux.nodes[seq.front()].phys);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const AuxArc* arc = nullptr;
    for (int ai : aux.out[seq[i]])
      if (aux.arcs[ai].to == seq[i + 1]) {
        arc = &aux.arcs[ai];
        break;
      }
    if (!arc) throw ValidationError("service path step without a connecting arc");
    p.total_weight += arc->weight;
    p.physical.insert(p.physical.end(), arc->realization.begin() + 1,
                      arc->realization.end());
  }
  for (int v : seq) p.bottleneck = std::min(p.bottleneck, capacity_of(aux, v));
  return p;
}

ServicePath sfc_shortest_path(const AuxNetwork& aux) {
  require_chain(aux);
  Digraph f = from_aux(aux), r = from_aux(aux, true);
  std::vector<char> allowed(aux.nodes.size(), 1);
  auto seq = lex_min_shortest(f, r, aux.source, aux.target, allowed);
  return make_service_path(aux, seq);
}

ServicePath robust_sfc_path(const AuxNetwork& aux) {
  require_chain(aux);
  int n = static_cast<int>(aux.nodes.size());
  Digraph f = from_aux(aux), r = from_aux(aux, true);
  // Widest-path labels: the best achievable bottleneck from the source.
  std::vector<double> best(n, -kInf);
  std::vector<char> done(n, 0);
  best[aux.source] = kInf;
  using Item = std::pair<double, int>;  // (bottleneck, -index) max-heap
  std::priority_queue<Item> pq;
  pq.push({kInf, -aux.source});
  while (!pq.empty()) {
    auto [b, negu] = pq.top();
    pq.pop();
    int u = -negu;
    if (done[u]) continue;
    done[u] = 1;
    for (const auto& a : f.out[u]) {
      if (done[a.to]) continue;
      double nb = std::min(b, capacity_of(aux, a.to));
      if (nb > best[a.to]) {
        best[a.to] = nb;
        pq.push({nb, -a.to});
      }
    }
  }
  if (best[aux.target] == -kInf) throw InfeasibleError("no feasible service path");
  double widest = best[aux.target];
  // Among paths achieving the widest bottleneck, take the shortest and then
  // the lexicographically smallest. Capacities of equal inputs compare
  // exactly, so the restriction below keeps precisely the usable copies.
  std::vector<char> allowed(n, 0);
  for (int i = 0; i < n; ++i) allowed[i] = capacity_of(aux, i) >= widest ? 1 : 0;
  auto seq = lex_min_shortest(f, r, aux.source, aux.target, allowed);
  return make_service_path(aux, seq);
}

Demand canonicalize_nonchained(const Demand& d) {
  if (d.ordered) return d;
  Demand out = d;
  std::sort(out.nfs.begin(), out.nfs.end());
  out.ordered = true;
  out.canonicalized = true;
  return out;
}

std::vector<WeightedPath> k_shortest_candidate_paths(const PhysicalNetwork& net, int s,
                                                     int t, int k) {
  if (s == t) throw ValidationError("path endpoints coincide");
  return yen(from_phys(net), s, t, k);
}

std::vector<ServicePath> k_shortest_aux_paths(const AuxNetwork& aux, int k) {
  auto raw = yen(from_aux(aux), aux.source, aux.target, k);
  std::vector<ServicePath> out;
  out.reserve(raw.size());
  for (const auto& p : raw) out.push_back(make_service_path(aux, p.nodes));
  return out;
}

namespace {

template <typename Emit>
void dfs_paths(const Digraph& g, int u, int t, std::vector<int>& stack,
               std::vector<char>& on_stack, int max_paths, int& count, Emit emit) {
  if (u == t) {
    if (++count > max_paths)
      throw GuardExceeded("path enumeration exceeded " + std::to_string(max_paths) +
                          " routes; use the k-shortest interface instead");
    emit(stack);
    return;
  }
  for (const auto& a : g.out[u]) {
    if (on_stack[a.to]) continue;
    on_stack[a.to] = 1;
    stack.push_back(a.to);
    dfs_paths(g, a.to, t, stack, on_stack, max_paths, count, emit);
    stack.pop_back();
    on_stack[a.to] = 0;
  }
}

}  // namespace

std::vector<WeightedPath> enumerate_phys_paths(const PhysicalNetwork& net, int s, int t,
                                               int max_paths) {
  Digraph g = from_phys(net);
  std::vector<WeightedPath> out;
  std::vector<int> stack{s};
  std::vector<char> on_stack(g.n, 0);
  on_stack[s] = 1;
  int count = 0;
  dfs_paths(g, s, t, stack, on_stack, max_paths, count, [&](const std::vector<int>& p) {
    out.push_back({p, weight_of(g, p)});
  });
  return out;
}

std::vector<ServicePath> enumerate_aux_paths(const AuxNetwork& aux, int max_paths) {
  Digraph g = from_aux(aux);
  std::vector<ServicePath> out;
  std::vector<int> stack{aux.source};
  std::vector<char> on_stack(g.n, 0);
  on_stack[aux.source] = 1;
  int count = 0;
  dfs_paths(g, aux.source, aux.target, stack, on_stack, max_paths, count,
            [&](const std::vector<int>& p) { out.push_back(make_service_path(aux, p)); });
  return out;
}

}  // namespace rnfv
