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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rnfv/errors.hpp"
#include "rnfv/experiment.hpp"

using namespace rnfv;

namespace {

std::map<std::string, std::vector<std::pair<double, double>>> by_series(
    const ResultTable& t) {
  std::map<std::string, std::vector<std::pair<double, double>>> out;
  for (const auto& r : t.rows) out[r.series].push_back({r.sweep, r.mean});
  return out;
}

double mean_at(const ResultTable& t, const std::string& series, double sweep) {
  for (const auto& r : t.rows)
    if (r.series == series && r.sweep == doctest::Approx(sweep).epsilon(1e-15))
      return r.mean;
  FAIL("missing row ", series, " at ", sweep);
  return 0.0;
}

// Minimal RFC-4180 reader: splits one line honoring quoted fields with
// doubled quotes. Enough to round-trip what render_csv emits.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

TEST_CASE("zero failure probability gives reliability exactly one") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::nonchained_reliability;
  spec.sweep_lo = 0.0;
  spec.sweep_hi = 0.0;
  spec.sweep_points = 1;
  spec.samples = 2;
  ResultTable t = run_nonchained_experiment(spec);
  REQUIRE(t.rows.size() == 3);
  for (const auto& r : t.rows) {
    CHECK(r.mean == 1.0);
    CHECK(r.stddev == 0.0);
    CHECK(r.samples == 2);
  }
}

TEST_CASE("reliability series ordering and strict sweep decrease") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::nonchained_reliability;
  spec.jobs = 4;
  ResultTable t = run_nonchained_experiment(spec);
  REQUIRE(t.rows.size() == 15);  // 5 sweep points x 3 fractions

  auto series = by_series(t);
  REQUIRE(series.count("pool40"));
  REQUIRE(series.count("pool50"));
  REQUIRE(series.count("pool60"));
  for (const auto& [name, pts] : series) {
    REQUIRE(pts.size() == 5);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      CHECK(pts[i].first < pts[i + 1].first);
      // Larger mean failure probability must strictly lower the reliability.
      CHECK(pts[i].second > pts[i + 1].second);
    }
  }
  for (const auto& [sweep, unused] : series["pool40"]) {
    (void)unused;
    double p40 = mean_at(t, "pool40", sweep);
    double p50 = mean_at(t, "pool50", sweep);
    double p60 = mean_at(t, "pool60", sweep);
    CHECK(p50 >= p40 - 1e-12);
    CHECK(p60 >= p50 - 1e-12);
  }
  for (const auto& r : t.rows) {
    CHECK(r.mean > 0.0);
    CHECK(r.mean <= 1.0);
  }
}

TEST_CASE("single-sample runs keep the pool ordering per drawn instance") {
  // With one sample per point the reported means are the per-instance optima,
  // so the nested-pool relaxation argument applies to every row exactly.
  for (std::uint64_t seed : {2ull, 3ull, 4ull}) {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::nonchained_reliability;
    spec.samples = 1;
    spec.seed = seed;
    spec.sweep_points = 3;
    spec.jobs = 4;
    ResultTable t = run_nonchained_experiment(spec);
    auto series = by_series(t);
    for (const auto& [sweep, unused] : series["pool40"]) {
      (void)unused;
      CHECK(mean_at(t, "pool50", sweep) >= mean_at(t, "pool40", sweep) - 1e-12);
      CHECK(mean_at(t, "pool60", sweep) >= mean_at(t, "pool50", sweep) - 1e-12);
    }
  }
}

TEST_CASE("identical spec and seed reproduce identical output bytes") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::nonchained_reliability;
  spec.jobs = 1;
  ResultTable a = run_nonchained_experiment(spec);
  spec.jobs = 8;  // worker count must not leak into results
  ResultTable b = run_nonchained_experiment(spec);
  CHECK(render_csv(a) == render_csv(b));
  CHECK(render_plot_data(a) == render_plot_data(b));
  CHECK(a.spec_hash == b.spec_hash);
}

TEST_CASE("deployment growth reaches the target with sane host counts") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::nonchained_deployment;
  spec.jobs = 4;
  ResultTable t = run_nonchained_experiment(spec);
  REQUIRE(t.rows.size() == 10);  // 5 sweep points x 2 series

  auto series = by_series(t);
  REQUIRE(series.count("nf1"));
  REQUIRE(series.count("nf3"));
  for (const auto& [name, pts] : series) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(pts[i].second >= 1.0);
      CHECK(pts[i].second <= 14.0);
      // More failure-prone nodes never call for fewer hosts on this desk
      // instance (deterministic for the fixed seed).
      if (i > 0) CHECK(pts[i].second >= pts[i - 1].second);
    }
  }
  for (const auto& [sweep, unused] : series["nf1"]) {
    (void)unused;
    CHECK(mean_at(t, "nf3", sweep) >= mean_at(t, "nf1", sweep));
  }
}

TEST_CASE("chain survivability orderings and the zero-failure constant") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::sfc_survivability;
  spec.jobs = 8;
  ResultTable t = run_sfc_experiment(spec);
  // 2 demand counts x (3 min rows + 5 sweep points x 3 shapes)
  REQUIRE(t.rows.size() == 2 * 3 + 2 * 5 * 3);

  SUBCASE("minimum enabled-node rows") {
    // The stage graph never links consecutive stages at one physical node, so
    // a straight chain needs two enabled nodes to alternate between, and a
    // fork whose later stages collapse to a single shared node needs the base
    // doubled until two distinct nodes appear there.
    for (double dc : {6.0, 10.0}) {
      CHECK(mean_at(t, "minnodes/1SFC", dc) == 2.0);
      CHECK(mean_at(t, "minnodes/rFork", dc) == 4.0);
      CHECK(mean_at(t, "minnodes/bFork", dc) == 4.0);
    }
  }

  SUBCASE("shape ordering at every sweep point") {
    for (const char* dc : {"d6", "d10"}) {
      auto one = by_series(t)[std::string("1SFC/") + dc];
      REQUIRE(one.size() == 5);
      for (const auto& [sweep, unused] : one) {
        (void)unused;
        double v1 = mean_at(t, std::string("1SFC/") + dc, sweep);
        double vr = mean_at(t, std::string("rFork/") + dc, sweep);
        double vb = mean_at(t, std::string("bFork/") + dc, sweep);
        CHECK(v1 >= vr);
        CHECK(vr >= vb);
        CHECK(vb > 0.0);
      }
    }
  }

  SUBCASE("strict decrease per series") {
    for (const auto& [name, pts] : by_series(t)) {
      if (name.rfind("minnodes/", 0) == 0) continue;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        CHECK(pts[i].second > pts[i + 1].second);
    }
  }

  SUBCASE("zero failure probability hits the order-count constant") {
    ExperimentSpec zero = spec;
    zero.sweep_lo = 0.0;
    zero.sweep_hi = 0.0;
    zero.sweep_points = 1;
    zero.samples = 1;
    ResultTable z = run_sfc_experiment(zero);
    for (const auto& r : z.rows) {
      if (r.series.rfind("minnodes/", 0) == 0) continue;
      // Known visiting order is still one of |F|! = 3! possibilities in the
      // survivable-probability definition.
      CHECK(r.mean == 1.0 / 6.0);
    }
  }
}

TEST_CASE("kind dispatch rejects mismatched runners") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::sfc_survivability;
  CHECK_THROWS_AS(run_nonchained_experiment(spec), ValidationError);
  spec.kind = ExperimentKind::nonchained_reliability;
  CHECK_THROWS_AS(run_sfc_experiment(spec), ValidationError);
}

TEST_CASE("spec validation rejects malformed sweeps") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::nonchained_reliability;
  spec.sweep_points = 0;
  CHECK_THROWS_AS(run_nonchained_experiment(spec), ValidationError);
  spec.sweep_points = 2;
  spec.sweep_hi = 1.0;
  CHECK_THROWS_AS(run_nonchained_experiment(spec), ValidationError);
  spec.sweep_hi = 0.4;
  spec.sweep_lo = 0.45;
  CHECK_THROWS_AS(run_nonchained_experiment(spec), ValidationError);
  spec.sweep_lo = 0.1;
  spec.samples = 0;
  CHECK_THROWS_AS(run_nonchained_experiment(spec), ValidationError);
}

TEST_CASE("csv rendering carries provenance and survives a round trip") {
  ResultTable t;
  t.seed = 42;
  t.build_id = kBuildId;
  t.spec_hash = "00ff00ff00ff00ff";
  t.rows.push_back({0.25, "plain", 0.5, 0.01, 7});
  t.rows.push_back({0.5, "odd,name \"x\"", 1.25, 0.0, 3});

  std::string csv = render_csv(t);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# seed 42");
  std::getline(in, line);
  CHECK(line == std::string("# build ") + kBuildId);
  std::getline(in, line);
  CHECK(line == "# params 00ff00ff00ff00ff");
  std::getline(in, line);
  CHECK(line == "sweep,series,mean,stddev,samples");

  std::getline(in, line);
  auto f1 = split_csv_line(line);
  REQUIRE(f1.size() == 5);
  CHECK(f1[0] == "0.25");
  CHECK(f1[1] == "plain");
  CHECK(f1[2] == "0.5");
  CHECK(f1[4] == "7");

  std::getline(in, line);
  auto f2 = split_csv_line(line);
  REQUIRE(f2.size() == 5);
  CHECK(f2[1] == "odd,name \"x\"");
  CHECK(f2[2] == "1.25");

  std::string dat = render_plot_data(t);
  CHECK(dat.find("0.25 plain 0.5\n") != std::string::npos);
}

TEST_CASE("fingerprint is stable and sensitive to spec fields") {
  ExperimentSpec spec;
  std::string h = spec_fingerprint(spec);
  CHECK(h.size() == 16);
  CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(spec_fingerprint(spec) == h);

  ExperimentSpec other = spec;
  other.seed = 2;
  CHECK(spec_fingerprint(other) != h);
  other = spec;
  other.sweep_points = 7;
  CHECK(spec_fingerprint(other) != h);
  other = spec;
  other.kind = ExperimentKind::sfc_survivability;
  CHECK(spec_fingerprint(other) != h);
  other = spec;
  other.jobs = 16;  // execution detail, not an input to the results
  CHECK(spec_fingerprint(other) == h);
}

TEST_CASE("emit_outputs writes both artifacts and embeds the fingerprint") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::nonchained_reliability;
  spec.sweep_points = 1;
  spec.sweep_lo = spec.sweep_hi = 0.2;
  spec.samples = 1;
  spec.jobs = 4;
  ResultTable t = run_nonchained_experiment(spec);

  auto dir = std::filesystem::temp_directory_path() / "rnfv_emit_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto paths = emit_outputs(t, spec, dir.string());
  REQUIRE(paths.size() == 2);
  CHECK(paths[0] ==
        (dir / ("nonchained-reliability-" + t.spec_hash + ".csv")).string());
  CHECK(paths[1] ==
        (dir / ("nonchained-reliability-" + t.spec_hash + ".dat")).string());
  for (const auto& p : paths) CHECK(std::filesystem::exists(p));

  std::ifstream csv(paths[0], std::ios::binary);
  std::stringstream buf;
  buf << csv.rdbuf();
  CHECK(buf.str() == render_csv(t));

  CHECK_THROWS_AS(emit_outputs(t, spec, (dir / "missing" / "deep").string()),
                  ValidationError);
  std::filesystem::remove_all(dir);
}
