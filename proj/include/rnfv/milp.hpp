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

#ifndef RNFV_MILP_HPP_
#define RNFV_MILP_HPP_

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rnfv/metrics.hpp"
#include "rnfv/netmodel.hpp"

namespace rnfv {

// How per-node survivability enters the linearized objective. `survival`
// uses ln(1 + rho_i), additive over copies of the evaluated products;
// `failure` uses ln rho_i (zero probabilities floored) so the optimum maps
// onto the metric module's failure products directly.
enum class LogMode { survival, failure };

inline constexpr double kFailureLogFloor = 1e-12;

struct MilpVar {
  std::string name;
  double lb = 0.0;
  double ub = 1.0;
  bool integral = false;
};

// One linear row: sum of coeff[var] over the listed variables, compared to
// rhs. sense is 'L' (<=), 'G' (>=) or 'E' (==).
struct MilpRow {
  std::string name;
  std::vector<std::pair<int, double>> coeff;
  char sense = 'L';
  double rhs = 0.0;
};

// Solver bookkeeping carried with the model: which variable plays which
// role, the candidate walks, and the per-node log weights. The LP export
// uses only vars/rows/objective; the structured solver uses the rest.
// One pool-valid way to realize a chained demand's stages along a candidate
// walk, recorded as the copies it uses. The walk may be selected only when
// some realization has every member deployed.
struct ChainTuple {
  int var = -1;                                       // its indicator variable
  int demand = -1;
  int path = -1;
  std::vector<std::pair<std::string, int>> members;   // (nf, node), distinct
};

struct MilpModel {
  std::vector<MilpVar> vars;
  std::vector<MilpRow> rows;
  std::vector<double> objective;  // minimize; aligned with vars
  double big_m = 0.0;

  LogMode log_mode = LogMode::survival;
  bool chained = false;
  std::vector<std::string> nf_order;                 // deterministic NF sweep order
  std::vector<double> node_log;                      // per node index
  std::vector<std::vector<std::vector<int>>> paths;  // [demand][path] node sequence
  std::vector<double> order_penalty;                 // per demand, ln of order count
  std::vector<std::string> demand_ids;
  std::vector<std::vector<std::string>> demand_nfs;  // requested NFs per demand
  std::map<std::string, int> copy_cap;               // per NF host budget
  int lambda = -1;
  std::map<std::pair<std::string, int>, int> z_index;            // (nf, node)
  std::vector<int> h_index;                                      // node
  std::map<std::pair<int, std::string>, int> xi_index;           // (demand, nf)
  std::vector<std::vector<int>> x_index;                         // [demand][path]
  std::map<std::tuple<int, std::string, int>, int> y_index;      // (demand, nf, node)
  std::vector<int> omega_index;                                  // chained only
  std::vector<int> beta_index;                                   // chained only
  std::vector<ChainTuple> chain_tuples;                          // chained only
};

enum class SolveStatus { optimal, infeasible, guard_exceeded };

struct SolveResult {
  SolveStatus status = SolveStatus::infeasible;
  double objective = 0.0;
  std::map<std::string, double> assignment;
  Deployment deployment;
  std::map<std::string, std::vector<int>> routing;  // demand id -> node sequence
};

struct Extraction {
  Deployment deployment;
  std::map<std::string, std::vector<int>> routing;
  MetricReport report;
};

// Candidate walks per demand (indexed like scenario.demands), as physical
// node sequences. Order-free demands get k shortest loopless substrate
// paths; chains get k shortest layered-graph paths projected to the
// substrate, which are stage-ordered by construction.
std::vector<std::vector<std::vector<int>>> default_candidate_paths(const Scenario& s,
                                                                   int k = 10);

// Worst-case deployment-failure model over order-free routings: copy-count
// caps, per-demand single-path selection over the given candidates, and the
// per-NF evaluated products linearized through binary copy-on-path
// indicators. Minimizes the worst per-demand, per-NF product.
MilpModel build_nonchained_model(const Scenario& s,
                                 const std::vector<std::vector<std::vector<int>>>& paths,
                                 LogMode mode = LogMode::survival);

// Chain variant: every demand must be ordered, candidate walks must respect
// the stage order (checked against the pools at build time), and each
// demand's evaluated product is discounted by the log of its order count.
// A selector picks the demand that attains the bound and pins it exactly.
// Per walk, indicator variables over its pool-valid stage realizations tie
// walk selection to a deployment that can actually host the stages in order.
MilpModel build_sfc_model(const Scenario& s,
                          const std::vector<std::vector<std::vector<int>>>& paths,
                          LogMode mode = LogMode::survival);

// CPLEX LP text: Minimize / Subject To / Bounds / Binary / End, 17
// significant digits, deterministic ordering. Suitable for external
// solvers.
std::string export_lp(const MilpModel& model);

// Exact optimum via structured enumeration: walk the copy placements
// depth-first with the copy-count caps pruning, resolve path choices and the
// continuous variables in closed form per leaf. Reports guard_exceeded when
// the number of free placement bits exceeds guard_bits; the LP export is the
// road past that.
SolveResult solve_exact(const MilpModel& model, int guard_bits = 24);

// Reads the deployment and routing off an optimal result, recomputes the
// survivability report with the chosen walks pinned, and cross-checks the
// objective against the candidate-set product mapping. A mismatch raises an
// internal-error diagnostic.
Extraction extract_solution(const MilpModel& model, const SolveResult& result,
                            const Scenario& s);

// Product-space value the model's optimum linearizes: worst over demands of
// (min over that demand's candidate walks of the worst per-NF product over
// deployed copies on the walk, divided by the demand's order count). The
// per-NF product multiplies 1 + rho_i (survival mode) or rho_i (failure
// mode) over the walk's distinct deployed hosts. For chains only walks the
// deployment can host in stage order enter the minimum.
double candidate_objective(const Scenario& s, const Deployment& dep,
                           const std::vector<std::vector<std::vector<int>>>& paths,
                           LogMode mode, bool chained);

}  // namespace rnfv

#endif  // RNFV_MILP_HPP_
