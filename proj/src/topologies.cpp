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

#include "rnfv/topologies.hpp"

#include <utility>
#include <vector>

#include "rnfv/errors.hpp"

namespace rnfv {

namespace {

PhysicalNetwork from_edge_list(int n, const std::vector<std::pair<int, int>>& edges) {
  PhysicalNetwork net;
  for (int i = 1; i <= n; ++i) {
    NodeRecord rec;
    rec.id = std::to_string(i);
    rec.failure_prob = 0.0;
    net.add_node(std::move(rec));
  }
  for (auto [u, v] : edges) net.add_edge(u - 1, v - 1, 1.0);
  return net;
}

PhysicalNetwork build_nsf() {
  static const std::vector<std::pair<int, int>> kEdges = {
      {1, 2},  {1, 3},   {1, 8},   {2, 3},   {2, 4},   {3, 6},   {4, 5},
      {4, 11}, {5, 6},   {5, 7},   {6, 13},  {7, 8},   {8, 9},   {9, 10},
      {9, 12}, {10, 11}, {10, 13}, {11, 12}, {11, 14}, {12, 14}, {13, 14}};
  return from_edge_list(14, kEdges);
}

PhysicalNetwork build_coronet() {
  // 75-node continental ring with 24 express chords. The ring keeps every
  // node on a cycle and each chord adds a second disjoint route between the
  // regions it spans, so the graph is 2-connected by construction.
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= 75; ++i) edges.emplace_back(i, i % 75 + 1);
  static const std::vector<std::pair<int, int>> kChords = {
      {1, 9},   {3, 14},  {5, 20},  {7, 26},  {10, 30}, {12, 34},
      {15, 38}, {17, 41}, {19, 45}, {22, 48}, {24, 51}, {27, 54},
      {29, 57}, {32, 59}, {35, 61}, {37, 63}, {40, 65}, {43, 67},
      {46, 69}, {49, 71}, {52, 72}, {55, 73}, {60, 74}, {64, 75}};
  edges.insert(edges.end(), kChords.begin(), kChords.end());
  return from_edge_list(75, edges);
}

}  // namespace

PhysicalNetwork builtin_topology(const std::string& name) {
  if (name == "nsf") return build_nsf();
  if (name == "coronet") return build_coronet();
  throw ValidationError("unknown builtin topology '" + name + "'");
}

}  // namespace rnfv
