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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "rnfv/auxnet.hpp"
#include "rnfv/errors.hpp"
#include "rnfv/netmodel.hpp"
#include "rnfv/pathfind.hpp"

using namespace rnfv;

namespace {

std::string data_path(const std::string& name) {
  return std::string(RNFV_DATA_DIR) + "/" + name;
}

std::vector<int> ids_to_walk(const Scenario& s, const std::vector<std::string>& ids) {
  std::vector<int> out;
  for (const auto& id : ids) out.push_back(s.network.index_of(id));
  return out;
}

bool path_order(const WeightedPath& a, const WeightedPath& b) {
  if (a.weight != b.weight) return a.weight < b.weight;
  return a.nodes < b.nodes;
}

// Reference for the widest service path: try each candidate bottleneck value
// and keep the largest one under which the target stays reachable.
double widest_by_threshold(const AuxNetwork& aux) {
  std::set<double> caps;
  for (std::size_t i = 0; i < aux.nodes.size(); ++i)
    if (!aux.nodes[i].nf.empty())
      caps.insert(node_capacity(aux.origin->network.node(aux.nodes[i].phys).failure_prob));
  double best = -1;
  for (double c : caps) {
    std::vector<char> ok(aux.nodes.size(), 0);
    for (std::size_t i = 0; i < aux.nodes.size(); ++i) {
      double cap = aux.nodes[i].nf.empty()
                       ? std::numeric_limits<double>::infinity()
                       : node_capacity(aux.origin->network.node(aux.nodes[i].phys).failure_prob);
      ok[i] = cap >= c;
    }
    std::vector<char> seen(aux.nodes.size(), 0);
    std::queue<int> q;
    q.push(aux.source);
    seen[aux.source] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int ai : aux.out[u]) {
        int v = aux.arcs[ai].to;
        if (!seen[v] && ok[v]) {
          seen[v] = 1;
          q.push(v);
        }
      }
    }
    if (seen[aux.target]) best = std::max(best, c);
  }
  return best;
}

}  // namespace

TEST_CASE("chain shortest path picks the direct middle route") {
  Scenario s = load_scenario_file(data_path("sixnode.scn"));
  AuxNetwork aux = build_sfc_aux(s, s.demands[0]);
  ServicePath p = sfc_shortest_path(aux);
  CHECK(p.total_weight == doctest::Approx(2.0));
  CHECK(p.physical == ids_to_walk(s, {"1", "5", "2"}));
  REQUIRE(p.aux_nodes.size() == 4);
  CHECK(aux.label(p.aux_nodes[1]) == "1@f1");
  CHECK(aux.label(p.aux_nodes[2]) == "2@f2");
}

TEST_CASE("robust chain path avoids the flaky middle hosts") {
  Scenario s = load_scenario_file(data_path("sixnode.scn"));
  AuxNetwork aux = build_sfc_aux(s, s.demands[0]);
  ServicePath p = robust_sfc_path(aux);
  // Hosts with failure probability 0.1 beat the 0.2 ones.
  CHECK(p.bottleneck == doctest::Approx(std::log(1.9)));
  CHECK(aux.label(p.aux_nodes[1]) == "1@f1");
  CHECK(aux.label(p.aux_nodes[2]) == "2@f2");
  CHECK(p.physical == ids_to_walk(s, {"1", "5", "2"}));
  CHECK(p.total_weight == doctest::Approx(2.0));
}

TEST_CASE("ring chain: every stage combination costs the same and the tie is lexicographic") {
  Scenario s = load_scenario_file(data_path("ring.scn"));
  AuxNetwork aux = build_sfc_aux(s, s.demands[0]);
  auto all = enumerate_aux_paths(aux);
  REQUIRE(all.size() == 12);
  for (const auto& p : all) CHECK(p.total_weight == doctest::Approx(10.0));

  ServicePath p = sfc_shortest_path(aux);
  CHECK(p.total_weight == doctest::Approx(10.0));
  CHECK(aux.label(p.aux_nodes[1]) == "1@f1");
  CHECK(aux.label(p.aux_nodes[2]) == "3@f2");
  CHECK(aux.label(p.aux_nodes[3]) == "6@f3");
  CHECK(p.physical ==
        ids_to_walk(s, {"8", "9", "1", "2", "3", "4", "5", "6", "7", "8", "9"}));
  // Transit nodes may repeat; the chosen copies sit on distinct nodes.
  CHECK(std::count(p.physical.begin(), p.physical.end(), s.network.index_of("8")) == 2);
}

TEST_CASE("layered k-shortest listing matches exhaustive enumeration") {
  Scenario s = load_scenario_file(data_path("ring.scn"));
  AuxNetwork aux = build_sfc_aux(s, s.demands[0]);
  auto listed = k_shortest_aux_paths(aux, 20);
  auto all = enumerate_aux_paths(aux);
  std::sort(all.begin(), all.end(), [](const ServicePath& a, const ServicePath& b) {
    if (a.total_weight != b.total_weight) return a.total_weight < b.total_weight;
    return a.aux_nodes < b.aux_nodes;
  });
  REQUIRE(listed.size() == all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(listed[i].aux_nodes == all[i].aux_nodes);
    CHECK(listed[i].physical == all[i].physical);
  }
  auto top3 = k_shortest_aux_paths(aux, 3);
  REQUIRE(top3.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(top3[i].aux_nodes == listed[i].aux_nodes);
}

TEST_CASE("substrate k-shortest agrees with enumeration on a complete graph") {
  PhysicalNetwork k4;
  for (int i = 0; i < 4; ++i) k4.add_node({std::to_string(i), 0.0, {}});
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) k4.add_edge(i, j, 1.0);
  auto all = enumerate_phys_paths(k4, 0, 3);
  REQUIRE(all.size() == 5);
  std::sort(all.begin(), all.end(), path_order);
  auto listed = k_shortest_candidate_paths(k4, 0, 3, 10);
  CHECK(listed == all);
  auto top = k_shortest_candidate_paths(k4, 0, 3, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].nodes == std::vector<int>{0, 3});
  CHECK(top[1].nodes == std::vector<int>{0, 1, 3});
}

TEST_CASE("substrate k-shortest respects weights") {
  PhysicalNetwork g;
  for (int i = 0; i < 4; ++i) g.add_node({std::to_string(i), 0.0, {}});
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 3, 1.0);
  g.add_edge(0, 2, 2.0);
  g.add_edge(2, 3, 2.0);
  g.add_edge(0, 3, 5.0);
  auto listed = k_shortest_candidate_paths(g, 0, 3, 9);
  REQUIRE(listed.size() == 3);
  CHECK(listed[0].nodes == std::vector<int>{0, 1, 3});
  CHECK(listed[0].weight == doctest::Approx(2.0));
  CHECK(listed[1].nodes == std::vector<int>{0, 2, 3});
  CHECK(listed[1].weight == doctest::Approx(4.0));
  CHECK(listed[2].nodes == std::vector<int>{0, 3});
  CHECK(listed[2].weight == doctest::Approx(5.0));
}

TEST_CASE("enumeration guard trips on dense graphs") {
  PhysicalNetwork k9;
  for (int i = 0; i < 9; ++i) k9.add_node({std::to_string(i), 0.0, {}});
  for (int i = 0; i < 9; ++i)
    for (int j = i + 1; j < 9; ++j) k9.add_edge(i, j, 1.0);
  CHECK_THROWS_AS(enumerate_phys_paths(k9, 0, 8), GuardExceeded);
  // The bounded interface still works.
  auto listed = k_shortest_candidate_paths(k9, 0, 8, 5);
  CHECK(listed.size() == 5);
  CHECK(listed[0].nodes == std::vector<int>{0, 8});
}

TEST_CASE("canonicalization imposes the lexicographic order once") {
  Demand d;
  d.source = "3";
  d.target = "4";
  d.ordered = false;
  d.nfs = {"f3", "f1", "f2"};
  Demand c = canonicalize_nonchained(d);
  CHECK(c.ordered);
  CHECK(c.canonicalized);
  CHECK(c.nfs == std::vector<std::string>{"f1", "f2", "f3"});
  // Already ordered demands are untouched.
  Demand o = d;
  o.ordered = true;
  Demand c2 = canonicalize_nonchained(o);
  CHECK(c2 == o);
  CHECK_FALSE(c2.canonicalized);
}

TEST_CASE("robust path bottleneck matches the threshold reference") {
  Scenario s = load_scenario_file(data_path("nsf.scn"));
  for (std::uint64_t seed : {3u, 11u, 57u}) {
    Scenario varied = s;
    varied.network = sample_failure_probs(s.network, 0.25, 0.005, seed);
    Demand d;
    d.source = "1";
    d.target = "7";
    d.ordered = true;
    d.nfs = {"f1", "f2"};
    AuxNetwork aux = build_sfc_aux(varied, d);
    ServicePath p = robust_sfc_path(aux);
    CHECK(p.bottleneck == doctest::Approx(widest_by_threshold(aux)));
    // Secondary criterion: shortest among the equally wide.
    for (const auto& q : k_shortest_aux_paths(aux, 400))
      if (q.bottleneck >= p.bottleneck) CHECK(p.total_weight <= q.total_weight + 1e-9);
  }
}

TEST_CASE("chain search rejects order-free graphs") {
  Scenario s = load_scenario_file(data_path("sixnode.scn"));
  AuxNetwork aux = build_nonchained_aux(s, s.demands[1]);
  CHECK_THROWS_AS(sfc_shortest_path(aux), ValidationError);
  CHECK_THROWS_AS(robust_sfc_path(aux), ValidationError);
}

TEST_CASE("explicit sequences must follow arcs") {
  Scenario s = load_scenario_file(data_path("sixnode.scn"));
  AuxNetwork aux = build_sfc_aux(s, s.demands[0]);
  CHECK_THROWS_AS(make_service_path(aux, {aux.source, aux.target}), ValidationError);
  CHECK_THROWS_AS(make_service_path(aux, {}), ValidationError);
}

TEST_CASE("path searches are reproducible") {
  Scenario s = load_scenario_file(data_path("nsf.scn"));
  Demand d;
  d.source = "2";
  d.target = "13";
  d.ordered = true;
  d.nfs = {"f1", "f2", "f3"};
  AuxNetwork aux = build_sfc_aux(s, d);
  CHECK(sfc_shortest_path(aux) == sfc_shortest_path(aux));
  CHECK(robust_sfc_path(aux) == robust_sfc_path(aux));
  CHECK(k_shortest_aux_paths(aux, 25) == k_shortest_aux_paths(aux, 25));
  CHECK(k_shortest_candidate_paths(s.network, 0, 13, 7) ==
        k_shortest_candidate_paths(s.network, 0, 13, 7));
}
