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

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "rnfv/errors.hpp"
#include "rnfv/netmodel.hpp"
#include "rnfv/topologies.hpp"

using namespace rnfv;

namespace {

std::string data_path(const std::string& name) {
  return std::string(RNFV_DATA_DIR) + "/" + name;
}

template <typename E>
std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const E& e) {
    return e.what();
  } catch (...) {
    return "(wrong exception type)";
  }
  return "(no exception)";
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("six node sample scenario parses with expected structure") {
  Scenario s = load_scenario_file(data_path("sixnode.scn"));
  CHECK(s.network.node_count() == 6);
  CHECK(s.network.edge_count() == 5);
  CHECK(s.catalog.nfs.size() == 2);
  CHECK(s.demands.size() == 2);

  auto ids = [&](const std::vector<int>& idxs) {
    std::vector<std::string> out;
    for (int i : idxs) out.push_back(s.network.node(i).id);
    return out;
  };
  CHECK(ids(s.catalog.pool.at("f1")) == std::vector<std::string>{"1", "3", "4", "5"});
  CHECK(ids(s.catalog.pool.at("f2")) == std::vector<std::string>{"2", "3", "5", "6"});

  CHECK(s.demands[0].ordered);
  CHECK_FALSE(s.demands[1].ordered);
  CHECK(s.demands[1].nfs == std::vector<std::string>{"f1", "f2"});
  CHECK(s.network.node(s.network.index_of("3")).failure_prob == doctest::Approx(0.2));

  // A tree-plus-one-leaf substrate: connected but with cut vertices.
  CHECK(s.network.connected());
  CHECK_FALSE(s.network.two_connected());
  REQUIRE(s.warnings.size() == 1);
  CHECK(contains(s.warnings[0], "2-connected"));
}

TEST_CASE("serialization round-trips every scenario field") {
  for (const char* name : {"sixnode.scn", "ring.scn", "nsf.scn"}) {
    Scenario s = load_scenario_file(data_path(name));
    Scenario again = parse_scenario(serialize_scenario(s));
    CHECK(again == s);
    // Idempotent: serializing the reparse gives identical text.
    CHECK(serialize_scenario(again) == serialize_scenario(s));
  }
}

TEST_CASE("serialization round-trips costs and awkward probabilities") {
  Scenario s = load_scenario_file(data_path("sixnode.scn"));
  s.catalog.deploy_cost[{"f1", "3"}] = 2.5;
  s.catalog.deploy_cost[{"f2", "6"}] = 0.125;
  s.network.node_mut(0).failure_prob = 1.0 / 3.0;
  validate_scenario(s);
  Scenario again = parse_scenario(serialize_scenario(s));
  CHECK(again == s);
  CHECK(again.network.node(0).failure_prob == 1.0 / 3.0);
  CHECK(again.catalog.cost("f1", "3") == 2.5);
  CHECK(again.catalog.cost("f1", "1") == 1.0);
}

TEST_CASE("syntax errors carry line and column") {
  std::string msg = message_of<ParseError>(
      [] { parse_scenario("[nodes]\n1 0.1\n"); });
  CHECK(contains(msg, "line 2"));
  CHECK(contains(msg, "3 fields"));

  msg = message_of<ParseError>([] { parse_scenario("[nodes]\n1 zero -\n"); });
  CHECK(contains(msg, "line 2, column 3"));
  CHECK(contains(msg, "number"));

  msg = message_of<ParseError>([] { parse_scenario("1 0.1 -\n") ; });
  CHECK(contains(msg, "before any section"));

  msg = message_of<ParseError>([] { parse_scenario("[nope]\n"); });
  CHECK(contains(msg, "unknown section"));

  msg = message_of<ParseError>([] { parse_scenario("[nodes]\n[nodes]\n"); });
  CHECK(contains(msg, "duplicate section"));

  msg = message_of<ParseError>(
      [] { parse_scenario("[demands]\na b 2 f1\n[nodes]\na 0 -\nb 0 -\n"); });
  CHECK(contains(msg, "ordered flag"));
}

TEST_CASE("unknown references are rejected by name") {
  const std::string base =
      "[nfs]\nf1 2\n[nodes]\na 0.1 f1\nb 0.1 f1\n[edges]\na b 1\n";
  std::string msg = message_of<ValidationError>(
      [&] { parse_scenario(base + "[demands]\na b 0 f9\n"); });
  CHECK(contains(msg, "f9"));

  msg = message_of<ValidationError>(
      [&] { parse_scenario("[nfs]\nf1 2\n[nodes]\na 0.1 f1,f9\nb 0.1 f1\n[edges]\na b 1\n"); });
  CHECK(contains(msg, "f9"));

  msg = message_of<ValidationError>(
      [&] { parse_scenario(base + "[costs]\nzz f1 1\n"); });
  CHECK(contains(msg, "zz"));

  msg = message_of<ValidationError>(
      [&] { parse_scenario("[nodes]\na 0.1 -\n[edges]\na qq 1\n"); });
  CHECK(contains(msg, "qq"));
}

TEST_CASE("invariant violations are rejected") {
  CHECK(contains(message_of<ValidationError>([] {
          parse_scenario("[nodes]\na 1.5 -\nb 0 -\n[edges]\na b 1\n");
        }),
        "[0,1]"));
  CHECK(contains(message_of<ValidationError>([] {
          parse_scenario("[nodes]\na 0 -\na 0 -\n");
        }),
        "duplicate node"));
  CHECK(contains(message_of<ValidationError>([] {
          parse_scenario("[nodes]\na 0 -\nb 0 -\n[edges]\na b 1\na b 2\n");
        }),
        "duplicate edge"));
  CHECK(contains(message_of<ValidationError>([] {
          parse_scenario("[nodes]\na 0 -\n[edges]\na a 1\n");
        }),
        "self-loop"));
  CHECK(contains(message_of<ValidationError>([] {
          parse_scenario("[nodes]\na 0 -\nb 0 -\n");
        }),
        "not connected"));
  const std::string base =
      "[nfs]\nf1 2\n[nodes]\na 0.1 f1\nb 0.1 f1\n[edges]\na b 1\n";
  CHECK(contains(message_of<ValidationError>([&] {
          parse_scenario(base + "[demands]\na b 0 f1\na b 0 f1\n");
        }),
        "duplicate demand"));
  CHECK(contains(message_of<ValidationError>([&] {
          parse_scenario(base + "[demands]\na a 0 f1\n");
        }),
        "endpoints"));
  CHECK(contains(message_of<ValidationError>([&] {
          parse_scenario(base + "[demands]\na b 0 f1,f1\n");
        }),
        "twice"));
  // f2 is declared but no node can host it.
  CHECK(contains(message_of<ValidationError>([] {
          parse_scenario("[nfs]\nf1 2\nf2 2\n[nodes]\na 0.1 f1\nb 0.1 f1\n"
                         "[edges]\na b 1\n[demands]\na b 0 f2\n");
        }),
        "no node supports"));
}

TEST_CASE("builtin topologies have the documented shape") {
  PhysicalNetwork nsf = builtin_topology("nsf");
  CHECK(nsf.node_count() == 14);
  CHECK(nsf.edge_count() == 21);
  CHECK(nsf.connected());
  CHECK(nsf.two_connected());

  PhysicalNetwork coro = builtin_topology("coronet");
  CHECK(coro.node_count() == 75);
  CHECK(coro.edge_count() == 99);
  CHECK(coro.connected());
  CHECK(coro.two_connected());

  CHECK_THROWS_AS(builtin_topology("mystery"), ValidationError);

  Scenario nsf_file = load_scenario_file(data_path("nsf.scn"));
  CHECK(nsf_file.network.edge_count() == 21);
  for (const auto& e : nsf_file.network.edges())
    CHECK(nsf.has_edge(nsf.index_of(nsf_file.network.node(e.u).id),
                       nsf.index_of(nsf_file.network.node(e.v).id)));
  CHECK(nsf_file.warnings.empty());
}

TEST_CASE("two-connectivity detects cut vertices") {
  PhysicalNetwork ring;
  for (int i = 0; i < 5; ++i) ring.add_node({std::to_string(i), 0.0, {}});
  for (int i = 0; i < 5; ++i) ring.add_edge(i, (i + 1) % 5, 1.0);
  CHECK(ring.two_connected());

  PhysicalNetwork path;
  for (int i = 0; i < 4; ++i) path.add_node({std::to_string(i), 0.0, {}});
  for (int i = 0; i + 1 < 4; ++i) path.add_edge(i, i + 1, 1.0);
  CHECK(path.connected());
  CHECK_FALSE(path.two_connected());

  // Two triangles sharing one vertex: every edge lies on a cycle yet the
  // shared vertex is a cut vertex.
  PhysicalNetwork bowtie;
  for (int i = 0; i < 5; ++i) bowtie.add_node({std::to_string(i), 0.0, {}});
  bowtie.add_edge(0, 1, 1.0);
  bowtie.add_edge(1, 2, 1.0);
  bowtie.add_edge(2, 0, 1.0);
  bowtie.add_edge(2, 3, 1.0);
  bowtie.add_edge(3, 4, 1.0);
  bowtie.add_edge(4, 2, 1.0);
  CHECK(bowtie.connected());
  CHECK_FALSE(bowtie.two_connected());
}

TEST_CASE("failure quantile is monotone and hits the requested moments") {
  const double mean = 0.25, var = 0.001;
  double prev = -1.0;
  for (int i = 1; i < 100; ++i) {
    double q = failure_quantile(mean, var, i / 100.0);
    CHECK(q > prev);
    CHECK(q >= 0.0);
    CHECK(q <= 1.0);
    prev = q;
  }
  // Midpoint integration of the quantile function recovers the moments.
  const int n = 20000;
  double m1 = 0, m2 = 0;
  for (int i = 0; i < n; ++i) {
    double q = failure_quantile(mean, var, (i + 0.5) / n);
    m1 += q;
    m2 += q * q;
  }
  m1 /= n;
  m2 = m2 / n - m1 * m1;
  CHECK(m1 == doctest::Approx(mean).epsilon(0.01));
  CHECK(m2 == doctest::Approx(var).epsilon(0.05));
}

TEST_CASE("failure quantile is monotone in the mean at fixed u") {
  for (double u : {0.1, 0.37, 0.5, 0.9}) {
    double prev = -1.0;
    for (double mean = 0.05; mean < 0.96; mean += 0.05) {
      double q = failure_quantile(mean, 0.001, u);
      CHECK(q > prev);
      prev = q;
    }
  }
}

TEST_CASE("failure quantile degenerates to the mean at zero variance") {
  for (double u : {0.01, 0.5, 0.99})
    CHECK(failure_quantile(0.3, 0.0, u) == doctest::Approx(0.3));
}

TEST_CASE("failure quantile falls back when moments do not admit a beta") {
  // variance >= mean*(1-mean) has no Beta distribution; the truncated
  // Gaussian fallback must still be monotone and stay inside [0,1].
  const double mean = 0.5, var = 0.3;
  double prev = -1.0;
  for (int i = 1; i < 50; ++i) {
    double q = failure_quantile(mean, var, i / 50.0);
    CHECK(q >= 0.0);
    CHECK(q <= 1.0);
    CHECK(q >= prev);
    prev = q;
  }
  CHECK(failure_quantile(mean, var, 0.5) == doctest::Approx(mean).epsilon(1e-6));
  CHECK_THROWS_AS(failure_quantile(0.0, 0.1, 0.5), ValidationError);
  CHECK_THROWS_AS(failure_quantile(0.5, -0.1, 0.5), ValidationError);
}

TEST_CASE("probability sampling is seeded and touches only NF-enabled nodes") {
  Scenario s = load_scenario_file(data_path("ring.scn"));
  PhysicalNetwork a = sample_failure_probs(s.network, 0.25, 0.001, 42);
  PhysicalNetwork b = sample_failure_probs(s.network, 0.25, 0.001, 42);
  PhysicalNetwork c = sample_failure_probs(s.network, 0.25, 0.001, 43);
  CHECK(a == b);
  bool any_diff = false;
  for (int i = 0; i < a.node_count(); ++i)
    if (a.node(i).failure_prob != c.node(i).failure_prob) any_diff = true;
  CHECK(any_diff);
  // Nodes 8 and 9 host nothing and keep their configured probability.
  CHECK(a.node(a.index_of("8")).failure_prob == 0.1);
  CHECK(a.node(a.index_of("9")).failure_prob == 0.1);
  for (const auto& rec : a.nodes())
    if (!rec.capabilities.empty()) {
      CHECK(rec.failure_prob > 0.0);
      CHECK(rec.failure_prob < 1.0);
    }
}
