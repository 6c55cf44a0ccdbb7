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

#include "rnfv/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>

#include "rnfv/errors.hpp"
#include "rnfv/rng.hpp"

namespace rnfv {

int PhysicalNetwork::add_node(NodeRecord rec) {
  if (index_.count(rec.id)) throw ValidationError("duplicate node id '" + rec.id + "'");
  int idx = static_cast<int>(nodes_.size());
  index_[rec.id] = idx;
  nodes_.push_back(std::move(rec));
  adj_.emplace_back();
  return idx;
}

void PhysicalNetwork::add_edge(int u, int v, double weight) {
  if (u == v) throw ValidationError("self-loop edge on node '" + nodes_[u].id + "'");
  if (has_edge(u, v))
    throw ValidationError("duplicate edge " + nodes_[u].id + " - " + nodes_[v].id);
  if (weight < 0) throw ValidationError("negative edge weight");
  edges_.push_back({u, v, weight});
  adj_[u].emplace_back(v, weight);
  adj_[v].emplace_back(u, weight);
}

int PhysicalNetwork::index_of(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

bool PhysicalNetwork::has_edge(int u, int v) const {
  for (const auto& [w, _] : adj_[u])
    if (w == v) return true;
  return false;
}

bool PhysicalNetwork::connected() const {
  int n = node_count();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (const auto& [v, w] : adj_[u]) {
      (void)w;
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == n;
}

bool PhysicalNetwork::two_connected() const {
  int n = node_count();
  if (n < 3 || !connected()) return false;
  // Iterative articulation-point search (Hopcroft-Tarjan).
  std::vector<int> disc(n, -1), low(n, 0), parent(n, -1), child_count(n, 0);
  int timer = 0;
  struct Frame {
    int u;
    std::size_t next_edge;
  };
  std::vector<Frame> stack;
  disc[0] = low[0] = timer++;
  stack.push_back({0, 0});
  bool articulation = false;
  while (!stack.empty() && !articulation) {
    Frame& f = stack.back();
    if (f.next_edge < adj_[f.u].size()) {
      int v = adj_[f.u][f.next_edge].first;
      ++f.next_edge;
      if (disc[v] == -1) {
        parent[v] = f.u;
        ++child_count[f.u];
        disc[v] = low[v] = timer++;
        stack.push_back({v, 0});
      } else if (v != parent[f.u]) {
        low[f.u] = std::min(low[f.u], disc[v]);
      }
    } else {
      int u = f.u;
      stack.pop_back();
      if (parent[u] != -1) {
        int p = parent[u];
        low[p] = std::min(low[p], low[u]);
        if (parent[p] != -1 && low[u] >= disc[p]) articulation = true;
      }
    }
  }
  if (child_count[0] > 1) articulation = true;
  return !articulation;
}

namespace {

struct Token {
  std::string text;
  int column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

double parse_double(const Token& t, int line) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(t.text, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, t.column, "expected a number, got '" + t.text + "'");
  }
  if (pos != t.text.size())
    throw ParseError(line, t.column, "expected a number, got '" + t.text + "'");
  return v;
}

long long parse_int(const Token& t, int line) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(t.text, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, t.column, "expected an integer, got '" + t.text + "'");
  }
  if (pos != t.text.size())
    throw ParseError(line, t.column, "expected an integer, got '" + t.text + "'");
  return v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Shortest decimal string that round-trips the value.
std::string fmt_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::stod(buf) == v) break;
  }
  return buf;
}

struct RawNode {
  std::string id;
  double prob;
  std::vector<std::string> caps;
  int line;
};
struct RawEdge {
  std::string u, v;
  double w;
  int line;
};
struct RawCost {
  std::string node, nf;
  double cost;
  int line;
};

}  // namespace

Scenario parse_scenario(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::string section;
  std::vector<RawNode> raw_nodes;
  std::vector<RawEdge> raw_edges;
  std::vector<std::pair<std::string, int>> raw_nfs;
  std::vector<std::pair<Demand, int>> raw_demands;
  std::vector<RawCost> raw_costs;
  SamplingSpec sampling;
  std::set<std::string> seen_sections;

  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const Token& first = toks[0];
    if (first.text.front() == '[') {
      if (toks.size() != 1)
        throw ParseError(lineno, toks[1].column, "unexpected token after section header");
      std::string name = first.text;
      if (name.size() < 3 || name.back() != ']')
        throw ParseError(lineno, first.column, "malformed section header '" + name + "'");
      name = name.substr(1, name.size() - 2);
      if (name != "nodes" && name != "edges" && name != "nfs" && name != "demands" &&
          name != "sampling" && name != "costs")
        throw ParseError(lineno, first.column, "unknown section '[" + name + "]'");
      if (!seen_sections.insert(name).second)
        throw ParseError(lineno, first.column, "duplicate section '[" + name + "]'");
      section = name;
      continue;
    }
    if (section.empty())
      throw ParseError(lineno, first.column, "data before any section header");

    if (section == "nodes") {
      if (toks.size() != 3)
        throw ParseError(lineno, first.column,
                         "node line needs 3 fields (id prob capabilities), got " +
                             std::to_string(toks.size()));
      RawNode rn;
      rn.id = toks[0].text;
      rn.prob = parse_double(toks[1], lineno);
      if (toks[2].text != "-") rn.caps = split_commas(toks[2].text);
      rn.line = lineno;
      raw_nodes.push_back(std::move(rn));
    } else if (section == "edges") {
      if (toks.size() != 3)
        throw ParseError(lineno, first.column,
                         "edge line needs 3 fields (u v weight), got " +
                             std::to_string(toks.size()));
      raw_edges.push_back({toks[0].text, toks[1].text, parse_double(toks[2], lineno), lineno});
    } else if (section == "nfs") {
      if (toks.size() != 2)
        throw ParseError(lineno, first.column, "nf line needs 2 fields (id limit), got " +
                                                   std::to_string(toks.size()));
      raw_nfs.emplace_back(toks[0].text, static_cast<int>(parse_int(toks[1], lineno)));
    } else if (section == "demands") {
      if (toks.size() != 4)
        throw ParseError(lineno, first.column,
                         "demand line needs 4 fields (source target ordered nfs), got " +
                             std::to_string(toks.size()));
      Demand d;
      d.source = toks[0].text;
      d.target = toks[1].text;
      long long flag = parse_int(toks[2], lineno);
      if (flag != 0 && flag != 1)
        throw ParseError(lineno, toks[2].column, "ordered flag must be 0 or 1");
      d.ordered = flag == 1;
      d.nfs = split_commas(toks[3].text);
      raw_demands.emplace_back(std::move(d), lineno);
    } else if (section == "sampling") {
      if (toks.size() != 2)
        throw ParseError(lineno, first.column, "sampling line needs 2 fields (key value)");
      const std::string& key = first.text;
      if (key == "mean")
        sampling.mean = parse_double(toks[1], lineno);
      else if (key == "variance")
        sampling.variance = parse_double(toks[1], lineno);
      else if (key == "samples")
        sampling.samples = static_cast<int>(parse_int(toks[1], lineno));
      else if (key == "seed")
        sampling.seed = static_cast<std::uint64_t>(parse_int(toks[1], lineno));
      else
        throw ParseError(lineno, first.column, "unknown sampling key '" + key + "'");
    } else {  // costs
      if (toks.size() != 3)
        throw ParseError(lineno, first.column,
                         "cost line needs 3 fields (node nf cost), got " +
                             std::to_string(toks.size()));
      raw_costs.push_back({toks[0].text, toks[1].text, parse_double(toks[2], lineno), lineno});
    }
  }

  Scenario s;
  s.sampling = sampling;
  for (auto& [nf, limit] : raw_nfs) {
    if (s.catalog.nfs.count(nf)) throw ValidationError("duplicate NF '" + nf + "'");
    s.catalog.nfs.insert(nf);
    s.catalog.limit[nf] = limit;
  }
  for (auto& rn : raw_nodes) {
    NodeRecord rec;
    rec.id = rn.id;
    rec.failure_prob = rn.prob;
    for (auto& c : rn.caps) {
      if (c.empty())
        throw ParseError(rn.line, 0, "empty capability entry on node '" + rn.id + "'");
      if (!s.catalog.nfs.count(c))
        throw ValidationError("node '" + rn.id + "' references unknown NF '" + c +
                              "' (line " + std::to_string(rn.line) + ")");
      rec.capabilities.insert(c);
    }
    s.network.add_node(std::move(rec));
  }
  for (auto& re : raw_edges) {
    int u = s.network.index_of(re.u), v = s.network.index_of(re.v);
    if (u < 0)
      throw ValidationError("edge references unknown node '" + re.u + "' (line " +
                            std::to_string(re.line) + ")");
    if (v < 0)
      throw ValidationError("edge references unknown node '" + re.v + "' (line " +
                            std::to_string(re.line) + ")");
    s.network.add_edge(u, v, re.w);
  }
  for (auto& [d, ln] : raw_demands) {
    if (s.network.index_of(d.source) < 0)
      throw ValidationError("demand references unknown node '" + d.source + "' (line " +
                            std::to_string(ln) + ")");
    if (s.network.index_of(d.target) < 0)
      throw ValidationError("demand references unknown node '" + d.target + "' (line " +
                            std::to_string(ln) + ")");
    for (auto& f : d.nfs)
      if (!s.catalog.nfs.count(f))
        throw ValidationError("demand " + d.id() + " references unknown NF '" + f +
                              "' (line " + std::to_string(ln) + ")");
    s.demands.push_back(d);
  }
  for (auto& rc : raw_costs) {
    if (s.network.index_of(rc.node) < 0)
      throw ValidationError("cost entry references unknown node '" + rc.node + "' (line " +
                            std::to_string(rc.line) + ")");
    if (!s.catalog.nfs.count(rc.nf))
      throw ValidationError("cost entry references unknown NF '" + rc.nf + "' (line " +
                            std::to_string(rc.line) + ")");
    if (rc.cost < 0) throw ValidationError("negative deployment cost (line " +
                                           std::to_string(rc.line) + ")");
    s.catalog.deploy_cost[{rc.nf, rc.node}] = rc.cost;
  }
  validate_scenario(s);
  return s;
}

void validate_scenario(Scenario& s) {
  s.warnings.clear();
  // Rebuild pools from capabilities.
  s.catalog.pool.clear();
  for (const auto& nf : s.catalog.nfs) s.catalog.pool[nf] = {};
  for (int i = 0; i < s.network.node_count(); ++i) {
    const auto& rec = s.network.node(i);
    if (rec.failure_prob < 0 || rec.failure_prob > 1)
      throw ValidationError("failure probability of node '" + rec.id +
                            "' outside [0,1]");
    for (const auto& c : rec.capabilities) {
      if (!s.catalog.nfs.count(c))
        throw ValidationError("node '" + rec.id + "' references unknown NF '" + c + "'");
      s.catalog.pool[c].push_back(i);
    }
  }
  for (const auto& [nf, limit] : s.catalog.limit)
    if (limit < 1) throw ValidationError("NF '" + nf + "' has limit < 1");
  std::set<std::string> demand_keys;
  for (auto& d : s.demands) {
    if (d.source == d.target)
      throw ValidationError("demand " + d.id() + " has identical endpoints");
    if (d.nfs.empty()) throw ValidationError("demand " + d.id() + " requests no NFs");
    std::set<std::string> uniq(d.nfs.begin(), d.nfs.end());
    if (uniq.size() != d.nfs.size())
      throw ValidationError("demand " + d.id() + " lists an NF twice");
    std::string key = d.id() + "|" + (d.ordered ? "1" : "0");
    for (auto& f : d.nfs) key += "|" + f;
    if (!demand_keys.insert(key).second)
      throw ValidationError("duplicate demand " + d.id());
    for (auto& f : d.nfs)
      if (s.catalog.pool.at(f).empty())
        throw ValidationError("demand " + d.id() + " requests NF '" + f +
                              "' which no node supports");
  }
  if (!s.network.connected()) throw ValidationError("substrate graph is not connected");
  if (s.network.node_count() >= 3 && !s.network.two_connected())
    s.warnings.push_back("substrate graph is not 2-connected");
  if (s.sampling.mean <= 0 || s.sampling.mean >= 1)
    throw ValidationError("sampling mean must lie in (0,1)");
  if (s.sampling.variance <= 0) throw ValidationError("sampling variance must be > 0");
  if (s.sampling.samples < 1) throw ValidationError("sampling sample count must be >= 1");
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "[nfs]\n";
  for (const auto& nf : s.catalog.nfs) {
    int limit = s.catalog.limit.count(nf) ? s.catalog.limit.at(nf) : s.network.node_count();
    out << nf << " " << limit << "\n";
  }
  out << "[nodes]\n";
  for (const auto& rec : s.network.nodes()) {
    out << rec.id << " " << fmt_double(rec.failure_prob) << " ";
    if (rec.capabilities.empty()) {
      out << "-";
    } else {
      bool sep = false;
      for (const auto& c : rec.capabilities) {
        if (sep) out << ",";
        out << c;
        sep = true;
      }
    }
    out << "\n";
  }
  out << "[edges]\n";
  for (const auto& e : s.network.edges())
    out << s.network.node(e.u).id << " " << s.network.node(e.v).id << " "
        << fmt_double(e.weight) << "\n";
  out << "[demands]\n";
  for (const auto& d : s.demands) {
    out << d.source << " " << d.target << " " << (d.ordered ? 1 : 0) << " ";
    for (std::size_t i = 0; i < d.nfs.size(); ++i) out << (i ? "," : "") << d.nfs[i];
    out << "\n";
  }
  out << "[sampling]\n";
  out << "mean " << fmt_double(s.sampling.mean) << "\n";
  out << "variance " << fmt_double(s.sampling.variance) << "\n";
  out << "samples " << s.sampling.samples << "\n";
  out << "seed " << s.sampling.seed << "\n";
  if (!s.catalog.deploy_cost.empty()) {
    out << "[costs]\n";
    for (const auto& [key, cost] : s.catalog.deploy_cost)
      out << key.second << " " << key.first << " " << fmt_double(cost) << "\n";
  }
  return out.str();
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

double failure_quantile(double mean, double variance, double u) {
  if (mean <= 0 || mean >= 1) throw ValidationError("sampling mean must lie in (0,1)");
  if (variance < 0) throw ValidationError("sampling variance must be >= 0");
  if (variance < 1e-15) return mean;
  u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
  double spread = mean * (1.0 - mean);
  if (variance < spread) {
    // Beta with matching first two moments.
    double c = spread / variance - 1.0;
    boost::math::beta_distribution<double> dist(mean * c, (1.0 - mean) * c);
    return std::clamp(boost::math::quantile(dist, u), 0.0, 1.0);
  }
  // Moments infeasible for a Beta: Gaussian truncated to [0,1]. Avoids the
  // bias a plain clamp would introduce.
  boost::math::normal_distribution<double> std_normal;
  double sigma = std::sqrt(variance);
  double lo = boost::math::cdf(std_normal, (0.0 - mean) / sigma);
  double hi = boost::math::cdf(std_normal, (1.0 - mean) / sigma);
  double p = std::min(std::max(lo + u * (hi - lo), 1e-12), 1.0 - 1e-12);
  return std::clamp(mean + sigma * boost::math::quantile(std_normal, p), 0.0, 1.0);
}

PhysicalNetwork sample_failure_probs(const PhysicalNetwork& net, double mean,
                                     double variance, std::uint64_t seed) {
  PhysicalNetwork out = net;
  Rng rng(seed);
  for (int i = 0; i < out.node_count(); ++i) {
    if (out.node(i).capabilities.empty()) continue;
    out.node_mut(i).failure_prob = failure_quantile(mean, variance, rng.uniform());
  }
  return out;
}

}  // namespace rnfv
