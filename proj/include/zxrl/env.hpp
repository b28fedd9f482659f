// Copyright 2026 The zxrl Authors
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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "zxrl/circuit.hpp"
#include "zxrl/convert.hpp"
#include "zxrl/extract.hpp"
#include "zxrl/nn.hpp"
#include "zxrl/rewrite.hpp"
#include "zxrl/simplify.hpp"

namespace zxrl {

/// Expected compression per (qubits, initial gates), used to scale rewards.
struct NormalizerTable {
  std::map<std::pair<int, int>, double> entries;

  [[nodiscard]] double lookup(int n_qubits, int n_gates) const {
    auto it = entries.find({n_qubits, n_gates});
    if (it != entries.end()) return it->second;
    return n_gates > 0 ? 0.2 * n_gates : 1.0;
  }

  static std::string key(int q, int g) {
    return "normalizer_" + std::to_string(q) + "_" + std::to_string(g);
  }

  friend bool operator==(const NormalizerTable&, const NormalizerTable&) = default;
};

/// max(1, mean(g - |extract(reduce_all(c))|)) over `samples` random circuits.
[[nodiscard]] inline double calibrate_normalizer(int n_qubits, int n_gates, GateSet set, int samples,
                                                 std::uint64_t seed) {
  if (samples < 1) throw Error("calibrate: need at least one sample");
  std::mt19937_64 rng(seed);
  double sum = 0;
  for (int i = 0; i < samples; ++i) {
    const Circuit c = random_circuit(n_qubits, n_gates, set, rng());
    const Circuit out = extract(reduce_all(to_graph_like(circuit_to_diagram(c))));
    sum += n_gates - static_cast<double>(out.gates.size());
  }
  return std::max(1.0, sum / samples);
}

struct EnvConfig {
  int n_qubits = 5;
  int n_gates = 25;
  GateSet gate_set = GateSet::Clifford;
  int max_steps = 200;
  NormalizerTable normalizer;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_qubits < 1 || n_gates < 0) throw Error("env: bad circuit size");
    if (max_steps < 1) throw Error("env: max_steps must be positive");
    for (const auto& [k, v] : normalizer.entries) {
      if (!(v > 0)) throw Error("env: normalizer entries must be positive");
    }
  }

  friend bool operator==(const EnvConfig&, const EnvConfig&) = default;
};

enum class EdgeKind : int { Wire = 0, ActionSpider = 1, ActionAction = 2 };

/// Graphs seen by the networks. The actor graph has the spider nodes first
/// (ascending vertex id), then one node per action in enumeration order,
/// Stop last. The critic graph holds the spider nodes and wires only.
struct PolicyGraph {
  static constexpr int kActorFeatures = 7;
  static constexpr int kCriticFeatures = 3;
  static constexpr int kEdgeFeatures = 3;

  nn::Mat actor_features;   // [sin, cos, boundary, lcomp, pivot, stop, id]
  nn::Mat critic_features;  // first three columns of the spider rows
  std::vector<std::array<nn::Index, 2>> edges;  // undirected, self-loops included
  nn::Mat edge_features;                        // one-hot per edge, zero on self-loops
  std::vector<VertexId> spider_ids;
  std::vector<RewriteAction> actions;
  nn::GraphIndex actor_graph;
  nn::GraphIndex critic_graph;

  [[nodiscard]] nn::Index num_spider_nodes() const { return static_cast<nn::Index>(spider_ids.size()); }
  [[nodiscard]] nn::Index num_nodes() const { return actor_features.rows(); }
  [[nodiscard]] nn::Index action_node(std::size_t i) const {
    return num_spider_nodes() + static_cast<nn::Index>(i);
  }
  [[nodiscard]] std::vector<nn::Index> action_nodes() const {
    std::vector<nn::Index> out;
    for (std::size_t i = 0; i < actions.size(); ++i) out.push_back(action_node(i));
    return out;
  }
  friend bool operator==(const PolicyGraph&, const PolicyGraph&) = default;
};

[[nodiscard]] inline PolicyGraph build_policy_graph(const ZxDiagram& d, const std::vector<RewriteAction>& actions) {
  PolicyGraph pg;
  pg.spider_ids = d.spiders();
  pg.actions = actions;
  const nn::Index ns = pg.num_spider_nodes();
  const nn::Index n = ns + static_cast<nn::Index>(actions.size());
  pg.actor_features = nn::Mat::Zero(n, PolicyGraph::kActorFeatures);
  std::map<VertexId, nn::Index> node_of;
  for (nn::Index i = 0; i < ns; ++i) {
    const VertexId v = pg.spider_ids[static_cast<std::size_t>(i)];
    node_of[v] = i;
    const double phi = d.phase(v).radians();
    pg.actor_features(i, 0) = std::sin(phi);
    pg.actor_features(i, 1) = std::cos(phi);
    pg.actor_features(i, 2) = d.boundary_neighbor(v) ? 1.0 : 0.0;
  }
  for (std::size_t k = 0; k < actions.size(); ++k) {
    const nn::Index i = ns + static_cast<nn::Index>(k);
    switch (actions[k].tag) {
      case RuleTag::LocalComp: pg.actor_features(i, 3) = 1; break;
      case RuleTag::Pivot:
      case RuleTag::BoundaryPivot:
      case RuleTag::GadgetFusion: pg.actor_features(i, 4) = 1; break;
      case RuleTag::Stop: pg.actor_features(i, 5) = 1; break;
      case RuleTag::IdentityRemove: pg.actor_features(i, 6) = 1; break;
    }
  }
  pg.critic_features = pg.actor_features.topLeftCorner(ns, PolicyGraph::kCriticFeatures);

  std::vector<EdgeKind> kinds;
  auto link = [&](nn::Index a, nn::Index b, EdgeKind k) {
    pg.edges.push_back({a, b});
    kinds.push_back(k);
  };
  for (const auto& [u, v, t] : d.edges()) {
    if (d.is_spider(u) && d.is_spider(v)) link(node_of.at(u), node_of.at(v), EdgeKind::Wire);
  }
  const std::size_t wires = pg.edges.size();
  for (std::size_t k = 0; k < actions.size(); ++k) {
    const nn::Index i = ns + static_cast<nn::Index>(k);
    const RewriteAction& a = actions[k];
    if (a.tag == RuleTag::Stop) {
      for (nn::Index s = 0; s < ns; ++s) link(i, s, EdgeKind::ActionSpider);
    } else {
      link(i, node_of.at(a.a), EdgeKind::ActionSpider);
      if (a.arity() == 2) link(i, node_of.at(a.b), EdgeKind::ActionSpider);
    }
    for (std::size_t m = k + 1; m < actions.size(); ++m) {
      link(i, ns + static_cast<nn::Index>(m), EdgeKind::ActionAction);
    }
  }
  const std::size_t typed = pg.edges.size();
  for (nn::Index i = 0; i < n; ++i) pg.edges.push_back({i, i});
  pg.edge_features = nn::Mat::Zero(static_cast<nn::Index>(pg.edges.size()), PolicyGraph::kEdgeFeatures);
  for (std::size_t e = 0; e < typed; ++e) {
    pg.edge_features(static_cast<nn::Index>(e), static_cast<int>(kinds[e])) = 1.0;
  }
  pg.actor_graph = nn::GraphIndex::from_undirected(n, pg.edges, pg.edge_features);

  std::vector<std::array<nn::Index, 2>> critic_edges(pg.edges.begin(), pg.edges.begin() + static_cast<std::ptrdiff_t>(wires));
  for (nn::Index i = 0; i < ns; ++i) critic_edges.push_back({i, i});
  nn::Mat critic_ef = nn::Mat::Zero(static_cast<nn::Index>(critic_edges.size()), PolicyGraph::kEdgeFeatures);
  critic_ef.topRows(static_cast<nn::Index>(wires)).col(0).setOnes();
  pg.critic_graph = nn::GraphIndex::from_undirected(ns, critic_edges, critic_ef);
  return pg;
}

/// Several policy graphs merged into disjoint unions for one forward pass.
struct PolicyBatch {
  nn::Index n_graphs = 0;
  nn::Mat actor_features;
  nn::GraphIndex actor_graph;
  std::vector<nn::Index> action_nodes;
  std::vector<nn::Index> action_seg;
  std::vector<std::size_t> action_offset;  // first entry of graph k in action_nodes
  nn::Mat critic_features;
  nn::GraphIndex critic_graph;
  std::vector<nn::Index> critic_seg;
};

[[nodiscard]] inline PolicyBatch make_batch(const std::vector<const PolicyGraph*>& graphs) {
  PolicyBatch b;
  b.n_graphs = static_cast<nn::Index>(graphs.size());
  std::vector<const nn::GraphIndex*> ag, cg;
  nn::Index na = 0, nc = 0;
  for (const PolicyGraph* g : graphs) {
    ag.push_back(&g->actor_graph);
    cg.push_back(&g->critic_graph);
    na += g->num_nodes();
    nc += g->num_spider_nodes();
  }
  b.actor_graph = nn::GraphIndex::disjoint_union(ag);
  b.critic_graph = nn::GraphIndex::disjoint_union(cg);
  b.actor_features.resize(na, PolicyGraph::kActorFeatures);
  b.critic_features.resize(nc, PolicyGraph::kCriticFeatures);
  nn::Index ra = 0, rc = 0;
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    const PolicyGraph& g = *graphs[k];
    b.actor_features.middleRows(ra, g.num_nodes()) = g.actor_features;
    b.critic_features.middleRows(rc, g.num_spider_nodes()) = g.critic_features;
    b.action_offset.push_back(b.action_nodes.size());
    for (std::size_t i = 0; i < g.actions.size(); ++i) {
      b.action_nodes.push_back(ra + g.action_node(i));
      b.action_seg.push_back(static_cast<nn::Index>(k));
    }
    for (nn::Index i = 0; i < g.num_spider_nodes(); ++i) b.critic_seg.push_back(static_cast<nn::Index>(k));
    ra += g.num_nodes();
    rc += g.num_spider_nodes();
  }
  b.action_offset.push_back(b.action_nodes.size());
  return b;
}

struct StepInfo {
  int gates_now = 0;
  int gates_initial = 0;
  int actions_available = 0;
  int gate_delta = 0;  // previous minus current extracted total
};

struct StepResult {
  PolicyGraph observation;
  double reward = 0;
  bool done = false;
  StepInfo info;
};

/// One rewriting episode: a random circuit in graph-like form, rewritten
/// step by step, rewarded by the drop in extracted gate count.
class Env {
 public:
  explicit Env(EnvConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

  StepResult reset(std::uint64_t episode_seed) {
    return reset(random_circuit(cfg_.n_qubits, cfg_.n_gates, cfg_.gate_set, episode_seed));
  }

  StepResult reset(const Circuit& c) {
    source_ = c;
    diagram_ = to_graph_like(circuit_to_diagram(c));
    initial_ = count_gates(extract(diagram_)).total;
    current_ = initial_;
    steps_ = 0;
    actions_ = enumerate_actions(diagram_);
    done_ = actions_.size() == 1;
    active_ = true;
    return result(0.0, 0);
  }

  StepResult step(nn::Index action_node_id) {
    if (!active_) throw Error("env: reset() before step()");
    if (done_) throw Error("env: episode is over");
    const nn::Index k = action_node_id - static_cast<nn::Index>(diagram_.num_spiders());
    if (k < 0 || k >= static_cast<nn::Index>(actions_.size())) {
      throw Error("env: invalid action node " + std::to_string(action_node_id));
    }
    const RewriteAction a = actions_[static_cast<std::size_t>(k)];
    ++steps_;
    if (a.tag == RuleTag::Stop) {
      done_ = true;
      return result(0.0, 0);
    }
    apply_in_place(diagram_, a);
    const int now = count_gates(extract(diagram_)).total;
    const int delta = current_ - now;
    current_ = now;
    actions_ = enumerate_actions(diagram_);
    done_ = actions_.size() == 1 || steps_ >= cfg_.max_steps;
    return result(delta / normalizer(), delta);
  }

  [[nodiscard]] double normalizer() const { return cfg_.normalizer.lookup(cfg_.n_qubits, cfg_.n_gates); }
  [[nodiscard]] const ZxDiagram& diagram() const { return diagram_; }
  [[nodiscard]] const Circuit& source() const { return source_; }
  [[nodiscard]] const std::vector<RewriteAction>& actions() const { return actions_; }
  [[nodiscard]] int steps() const { return steps_; }
  [[nodiscard]] bool done() const { return done_; }
  [[nodiscard]] int gates_initial() const { return initial_; }
  [[nodiscard]] int gates_now() const { return current_; }
  [[nodiscard]] const EnvConfig& config() const { return cfg_; }

 private:
  StepResult result(double reward, int delta) const {
    StepResult r;
    r.observation = build_policy_graph(diagram_, actions_);
    r.reward = reward;
    r.done = done_;
    r.info = {current_, initial_, static_cast<int>(actions_.size()), delta};
    return r;
  }

  EnvConfig cfg_;
  Circuit source_;
  ZxDiagram diagram_;
  std::vector<RewriteAction> actions_;
  int initial_ = 0;
  int current_ = 0;
  int steps_ = 0;
  bool done_ = true;
  bool active_ = false;
};

/// N independent environments; env i draws its episode seeds from a
/// generator seeded with cfg.seed + i and restarts automatically.
class VecEnv {
 public:
  VecEnv(const EnvConfig& cfg, int n) {
    if (n < 1) throw Error("vec env: need at least one environment");
    for (int i = 0; i < n; ++i) {
      envs_.emplace_back(cfg);
      rngs_.emplace_back(cfg.seed + static_cast<std::uint64_t>(i));
    }
    obs_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) restart(i);
  }

  [[nodiscard]] int size() const { return static_cast<int>(envs_.size()); }
  [[nodiscard]] const StepResult& current(int i) const { return obs_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] Env& env(int i) { return envs_[static_cast<std::size_t>(i)]; }

  /// Steps env i; on episode end the returned result is the terminal one
  /// and current(i) already holds the next episode's first observation.
  StepResult step(int i, nn::Index action_node_id) {
    StepResult r = envs_[static_cast<std::size_t>(i)].step(action_node_id);
    if (r.done) {
      restart(i);
    } else {
      obs_[static_cast<std::size_t>(i)] = r;
    }
    return r;
  }

 private:
  void restart(int i) {
    // Episodes with nothing to do are skipped.
    const auto k = static_cast<std::size_t>(i);
    for (int attempt = 0; attempt < 1000; ++attempt) {
      obs_[k] = envs_[k].reset(rngs_[k]());
      if (!obs_[k].done) return;
    }
    throw Error("vec env: random circuits offer no rewrites");
  }

  std::vector<Env> envs_;
  std::vector<std::mt19937_64> rngs_;
  std::vector<StepResult> obs_;
};

}  // namespace zxrl
