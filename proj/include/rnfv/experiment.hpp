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
//
// Sweep experiments over the provisioning toolkit: NF service reliability
// versus node failure probability on the NSF substrate, deployment growth to
// a target reliability, and chain survivability on the CORONET substrate for
// three forwarding-graph shapes. Failure draws use common random numbers per
// (sample, node) so every series varies only through the swept mean, which
// makes the documented orderings hold per instance rather than on average.

#ifndef RNFV_EXPERIMENT_HPP_
#define RNFV_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace rnfv {

inline constexpr const char* kBuildId = "0.1.0";

enum class ExperimentKind {
  nonchained_reliability,  // best worst-case reliability per pool fraction
  nonchained_deployment,   // hosts needed to reach a target reliability
  sfc_survivability,       // chain survivable probability per graph shape
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::nonchained_reliability;
  std::string topology;  // defaults per kind when empty: nsf / nsf / coronet

  // Mean node failure probability sweep, endpoints included.
  double sweep_lo = 0.01;
  double sweep_hi = 0.5;
  int sweep_points = 5;
  double variance = 0.001;
  int samples = 5;
  std::uint64_t seed = 1;
  int jobs = 1;

  // nonchained_reliability: enabled-node fractions, shared host budget, and
  // candidate walks per demand for the exact solver.
  std::vector<double> pool_fractions = {0.4, 0.5, 0.6};
  int host_budget = 3;
  int candidate_walks = 5;

  // nonchained_deployment: grow until the system metric reaches the target;
  // one series per number of NF types a demand requires.
  double target_reliability = 0.9;
  std::vector<int> nf_counts = {1, 3};

  // sfc_survivability: chain length, first-stage pool size, demand counts.
  int chain_length = 3;
  int stage_pool = 8;
  std::vector<int> demand_counts = {6, 10};
};

struct ResultRow {
  double sweep = 0.0;
  std::string series;
  double mean = 0.0;
  double stddev = 0.0;
  int samples = 0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::uint64_t seed = 0;
  std::string build_id;
  std::string spec_hash;
};

// Reliability and deployment protocols (kind selects which). Infeasible
// sample points score reliability 0 and the run continues.
ResultTable run_nonchained_experiment(const ExperimentSpec& spec);

// Survivable-probability protocol plus the minimum enabled-node search.
ResultTable run_sfc_experiment(const ExperimentSpec& spec);

// FNV-1a fingerprint of every spec field, as 16 hex digits. Stable across
// runs and embedded in emitted filenames.
std::string spec_fingerprint(const ExperimentSpec& spec);

// Comment header (seed, build, fingerprint) then an RFC-4180 table.
std::string render_csv(const ResultTable& t);

// One "x series y" triple per row, for plotting tools.
std::string render_plot_data(const ResultTable& t);

// Writes <kind>-<fingerprint>.csv and .dat under out_dir; returns the paths.
std::vector<std::string> emit_outputs(const ResultTable& t, const ExperimentSpec& spec,
                                      const std::string& out_dir);

}  // namespace rnfv

#endif  // RNFV_EXPERIMENT_HPP_
