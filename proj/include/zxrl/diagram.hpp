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
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zxrl/error.hpp"
#include "zxrl/phase.hpp"

namespace zxrl {

using VertexId = int;

enum class VertexKind : std::uint8_t { ZSpider, XSpider, Boundary };
enum class EdgeType : std::uint8_t { Simple, Hadamard };

[[nodiscard]] constexpr EdgeType toggled(EdgeType t) {
  return t == EdgeType::Simple ? EdgeType::Hadamard : EdgeType::Simple;
}

/// Undirected ZX-diagram with at most one edge per vertex pair and no
/// self-loops. Vertex ids are handed out by a monotone counter and never
/// reused; every iteration is in ascending id order.
class ZxDiagram {
 public:
  using Adjacency = std::map<VertexId, EdgeType>;

  ZxDiagram() = default;

  VertexId add_vertex(VertexKind kind, Phase phase = {}) {
    const VertexId id = next_id_++;
    if (kind == VertexKind::Boundary) phase = Phase{};
    vertices_.emplace(id, Vertex{kind, phase, {}});
    return id;
  }

  void remove_vertex(VertexId v) {
    auto it = vertices_.find(v);
    if (it == vertices_.end()) return;
    for (const auto& [w, t] : it->second.adj) vertices_.at(w).adj.erase(v);
    vertices_.erase(it);
    std::erase(inputs_, v);
    std::erase(outputs_, v);
  }

  [[nodiscard]] bool has_vertex(VertexId v) const {
    return vertices_.contains(v);
  }
  [[nodiscard]] VertexKind kind(VertexId v) const { return at(v).kind; }
  void set_kind(VertexId v, VertexKind k) { at(v).kind = k; }
  [[nodiscard]] Phase phase(VertexId v) const { return at(v).phase; }
  void set_phase(VertexId v, Phase p) {
    if (at(v).kind != VertexKind::Boundary) at(v).phase = p;
  }
  void add_to_phase(VertexId v, Phase p) { set_phase(v, phase(v) + p); }

  [[nodiscard]] bool is_boundary(VertexId v) const {
    return kind(v) == VertexKind::Boundary;
  }
  [[nodiscard]] bool is_spider(VertexId v) const { return !is_boundary(v); }

  /// Adds an edge; the pair must currently be unconnected.
  void add_edge(VertexId u, VertexId v, EdgeType t) {
    if (u == v) throw Error("self-loop requested on vertex " + std::to_string(u));
    auto& au = at(u).adj;
    if (au.contains(v)) {
      throw Error("parallel edge requested between " + std::to_string(u) +
                  " and " + std::to_string(v));
    }
    au.emplace(v, t);
    at(v).adj.emplace(u, t);
  }

  void remove_edge(VertexId u, VertexId v) {
    at(u).adj.erase(v);
    at(v).adj.erase(u);
  }

  [[nodiscard]] std::optional<EdgeType> edge(VertexId u, VertexId v) const {
    const auto& au = at(u).adj;
    auto it = au.find(v);
    if (it == au.end()) return std::nullopt;
    return it->second;
  }
  [[nodiscard]] bool connected(VertexId u, VertexId v) const {
    return at(u).adj.contains(v);
  }

  void set_edge_type(VertexId u, VertexId v, EdgeType t) {
    at(u).adj.at(v) = t;
    at(v).adj.at(u) = t;
  }

  /// Adds a Hadamard edge between two spiders, or removes it if present.
  /// Two parallel Hadamard edges between Z-spiders cancel.
  void toggle_hadamard(VertexId u, VertexId v) {
    if (auto e = edge(u, v)) {
      if (*e != EdgeType::Hadamard) {
        throw Error("toggle_hadamard on a simple edge " + std::to_string(u) +
                    "-" + std::to_string(v));
      }
      remove_edge(u, v);
    } else {
      add_edge(u, v, EdgeType::Hadamard);
    }
  }

  [[nodiscard]] const Adjacency& neighbors(VertexId v) const {
    return at(v).adj;
  }
  [[nodiscard]] std::vector<VertexId> neighbor_ids(VertexId v) const {
    std::vector<VertexId> out;
    out.reserve(at(v).adj.size());
    for (const auto& [w, t] : at(v).adj) out.push_back(w);
    return out;
  }
  [[nodiscard]] std::size_t degree(VertexId v) const { return at(v).adj.size(); }

  [[nodiscard]] std::vector<VertexId> vertices() const {
    std::vector<VertexId> out;
    out.reserve(vertices_.size());
    for (const auto& [id, v] : vertices_) out.push_back(id);
    return out;
  }
  [[nodiscard]] std::vector<VertexId> spiders() const {
    std::vector<VertexId> out;
    for (const auto& [id, v] : vertices_) {
      if (v.kind != VertexKind::Boundary) out.push_back(id);
    }
    return out;
  }

  [[nodiscard]] std::size_t num_vertices() const { return vertices_.size(); }
  [[nodiscard]] std::size_t num_edges() const {
    std::size_t twice = 0;
    for (const auto& [id, v] : vertices_) twice += v.adj.size();
    return twice / 2;
  }
  [[nodiscard]] std::size_t num_spiders() const {
    std::size_t n = 0;
    for (const auto& [id, v] : vertices_) n += v.kind != VertexKind::Boundary;
    return n;
  }

  /// Ordered (u < v) list of all edges.
  [[nodiscard]] std::vector<std::tuple<VertexId, VertexId, EdgeType>> edges()
      const {
    std::vector<std::tuple<VertexId, VertexId, EdgeType>> out;
    for (const auto& [u, vx] : vertices_) {
      for (const auto& [v, t] : vx.adj) {
        if (u < v) out.emplace_back(u, v, t);
      }
    }
    return out;
  }

  [[nodiscard]] const std::vector<VertexId>& inputs() const { return inputs_; }
  [[nodiscard]] const std::vector<VertexId>& outputs() const { return outputs_; }
  void set_inputs(std::vector<VertexId> in) { inputs_ = std::move(in); }
  void set_outputs(std::vector<VertexId> out) { outputs_ = std::move(out); }

  [[nodiscard]] bool is_input(VertexId v) const {
    return std::find(inputs_.begin(), inputs_.end(), v) != inputs_.end();
  }
  [[nodiscard]] bool is_output(VertexId v) const {
    return std::find(outputs_.begin(), outputs_.end(), v) != outputs_.end();
  }

  [[nodiscard]] VertexId next_id() const { return next_id_; }

  /// Restores an exact vertex id; used by deserialization only.
  void insert_vertex_with_id(VertexId id, VertexKind kind, Phase phase) {
    if (id < 0 || vertices_.contains(id)) {
      throw Error("duplicate or negative vertex id " + std::to_string(id));
    }
    if (kind == VertexKind::Boundary) phase = Phase{};
    vertices_.emplace(id, Vertex{kind, phase, {}});
    next_id_ = std::max(next_id_, id + 1);
  }
  void bump_next_id(VertexId id) { next_id_ = std::max(next_id_, id); }

  /// First boundary neighbor of a spider, if any.
  [[nodiscard]] std::optional<VertexId> boundary_neighbor(VertexId v) const {
    for (const auto& [w, t] : at(v).adj) {
      if (kind(w) == VertexKind::Boundary) return w;
    }
    return std::nullopt;
  }

  /// A Z-spider none of whose neighbors is a boundary.
  [[nodiscard]] bool is_interior(VertexId v) const {
    if (kind(v) != VertexKind::ZSpider) return false;
    for (const auto& [w, t] : at(v).adj) {
      if (kind(w) == VertexKind::Boundary) return false;
    }
    return true;
  }

  [[nodiscard]] std::size_t num_interior_spiders() const {
    std::size_t n = 0;
    for (const auto& [id, v] : vertices_) n += is_interior(id);
    return n;
  }

  /// Structural equality; the id counter is not compared.
  friend bool operator==(const ZxDiagram& a, const ZxDiagram& b) {
    return a.vertices_ == b.vertices_ && a.inputs_ == b.inputs_ && a.outputs_ == b.outputs_;
  }

 private:
  struct Vertex {
    VertexKind kind = VertexKind::ZSpider;
    Phase phase;
    Adjacency adj;
    friend bool operator==(const Vertex&, const Vertex&) = default;
  };

  Vertex& at(VertexId v) {
    auto it = vertices_.find(v);
    if (it == vertices_.end()) throw Error("no vertex " + std::to_string(v));
    return it->second;
  }
  const Vertex& at(VertexId v) const {
    auto it = vertices_.find(v);
    if (it == vertices_.end()) throw Error("no vertex " + std::to_string(v));
    return it->second;
  }

  std::map<VertexId, Vertex> vertices_;
  std::vector<VertexId> inputs_;
  std::vector<VertexId> outputs_;
  VertexId next_id_ = 0;
};

// -- graph-like form ---------------------------------------------------------

/// Checks the graph-like normal form: only Z-spiders besides boundaries,
/// spider-spider wires are Hadamard, each boundary has exactly one neighbor
/// and it is a spider, and no spider touches more than one boundary.
/// Boundary wires may be of either type.
[[nodiscard]] inline bool is_graph_like(const ZxDiagram& d,
                                        std::string* why = nullptr) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  std::size_t listed = 0;
  for (VertexId b : d.inputs()) {
    if (!d.has_vertex(b) || !d.is_boundary(b)) return fail("bad input id");
    if (d.is_output(b)) return fail("vertex is both input and output");
    ++listed;
  }
  for (VertexId b : d.outputs()) {
    if (!d.has_vertex(b) || !d.is_boundary(b)) return fail("bad output id");
    ++listed;
  }
  std::size_t boundaries = 0;
  for (VertexId v : d.vertices()) {
    switch (d.kind(v)) {
      case VertexKind::XSpider:
        return fail("X-spider " + std::to_string(v));
      case VertexKind::Boundary: {
        ++boundaries;
        if (d.degree(v) != 1) {
          return fail("boundary " + std::to_string(v) + " has degree " +
                      std::to_string(d.degree(v)));
        }
        const VertexId w = d.neighbors(v).begin()->first;
        if (d.is_boundary(w)) {
          return fail("boundary " + std::to_string(v) + " touches boundary");
        }
        break;
      }
      case VertexKind::ZSpider: {
        int bnd = 0;
        for (const auto& [w, t] : d.neighbors(v)) {
          if (d.is_boundary(w)) {
            ++bnd;
          } else if (t != EdgeType::Hadamard) {
            return fail("simple edge " + std::to_string(v) + "-" +
                        std::to_string(w));
          }
        }
        if (bnd > 1) {
          return fail("spider " + std::to_string(v) + " has " +
                      std::to_string(bnd) + " boundaries");
        }
        break;
      }
    }
  }
  if (boundaries != listed) return fail("unlisted boundary vertex");
  return true;
}

/// Identity on n qubits in graph-like form: in -S- z -H- z -H- out per wire.
[[nodiscard]] inline ZxDiagram new_diagram(int n_qubits) {
  if (n_qubits < 1) throw Error("new_diagram needs at least one qubit");
  ZxDiagram d;
  std::vector<VertexId> in, out;
  for (int q = 0; q < n_qubits; ++q) in.push_back(d.add_vertex(VertexKind::Boundary));
  for (int q = 0; q < n_qubits; ++q) out.push_back(d.add_vertex(VertexKind::Boundary));
  for (int q = 0; q < n_qubits; ++q) {
    const VertexId a = d.add_vertex(VertexKind::ZSpider);
    const VertexId b = d.add_vertex(VertexKind::ZSpider);
    d.add_edge(in[q], a, EdgeType::Simple);
    d.add_edge(a, b, EdgeType::Hadamard);
    d.add_edge(b, out[q], EdgeType::Hadamard);
  }
  d.set_inputs(std::move(in));
  d.set_outputs(std::move(out));
  return d;
}

namespace detail {

/// Connects two Z-spiders that are about to be (or already are) one spider,
/// resolving a possible parallel edge: H+H cancel, S+S collapse, and a
/// mixed pair leaves a Simple edge plus a pi phase from the Hadamard loop.
inline void add_edge_between_z(ZxDiagram& d, VertexId u, VertexId w,
                               EdgeType t) {
  auto existing = d.edge(u, w);
  if (!existing) {
    d.add_edge(u, w, t);
    return;
  }
  if (*existing == EdgeType::Hadamard && t == EdgeType::Hadamard) {
    d.remove_edge(u, w);
  } else if (*existing != t) {
    d.set_edge_type(u, w, EdgeType::Simple);
    d.add_to_phase(u, Phase::pi());
  }
}

/// Merges Z-spider `v` into Z-spider `u` (spider fusion). Any u-v edge
/// becomes a self-loop: Hadamard loops add pi, simple loops vanish.
inline void fuse_into(ZxDiagram& d, VertexId u, VertexId v) {
  if (auto e = d.edge(u, v); e && *e == EdgeType::Hadamard) {
    d.add_to_phase(u, Phase::pi());
  }
  d.add_to_phase(u, d.phase(v));
  const auto nbrs = d.neighbors(v);
  d.remove_vertex(v);
  for (const auto& [w, t] : nbrs) {
    if (w == u) continue;
    if (d.is_boundary(w)) {
      d.add_edge(u, w, t);
    } else {
      add_edge_between_z(d, u, w, t);
    }
  }
}

/// Replaces the wire b -t- w by b -t'- z -H- w with one new phase-0 spider z.
inline VertexId insert_spider_on_boundary(ZxDiagram& d, VertexId b,
                                          VertexId w) {
  const EdgeType t = *d.edge(b, w);
  d.remove_edge(b, w);
  const VertexId z = d.add_vertex(VertexKind::ZSpider);
  d.add_edge(b, z, toggled(t));
  d.add_edge(z, w, EdgeType::Hadamard);
  return z;
}

}  // namespace detail

/// Rewrites any diagram into graph-like form with the h, hh and f rules,
/// dropping self-loops and inserting phase-0 spiders on boundary wires
/// where needed.
[[nodiscard]] inline ZxDiagram to_graph_like(ZxDiagram d) {
  // X-spiders become Z-spiders with all incident wires toggled.
  for (VertexId v : d.vertices()) {
    if (d.kind(v) != VertexKind::XSpider) continue;
    d.set_kind(v, VertexKind::ZSpider);
    for (VertexId w : d.neighbor_ids(v)) d.set_edge_type(v, w, toggled(*d.edge(v, w)));
  }

  // Fuse along simple spider-spider wires until none are left.
  bool fused = true;
  while (fused) {
    fused = false;
    for (VertexId u : d.vertices()) {
      if (!d.has_vertex(u) || d.kind(u) != VertexKind::ZSpider) continue;
      for (;;) {
        std::optional<VertexId> partner;
        for (const auto& [w, t] : d.neighbors(u)) {
          if (t == EdgeType::Simple && d.kind(w) == VertexKind::ZSpider) {
            partner = w;
            break;
          }
        }
        if (!partner) break;
        detail::fuse_into(d, u, *partner);
        fused = true;
      }
    }
  }

  // Boundary conditions.
  std::vector<VertexId> bounds = d.inputs();
  bounds.insert(bounds.end(), d.outputs().begin(), d.outputs().end());
  for (VertexId b : bounds) {
    if (d.degree(b) != 1) throw Error("boundary without a unique wire");
    const auto [w, t] = *d.neighbors(b).begin();
    if (d.is_boundary(w)) {
      const VertexId z1 = d.add_vertex(VertexKind::ZSpider);
      const VertexId z2 = d.add_vertex(VertexKind::ZSpider);
      d.remove_edge(b, w);
      d.add_edge(b, z1, EdgeType::Simple);
      d.add_edge(z1, z2, EdgeType::Hadamard);
      d.add_edge(z2, w, toggled(t));
    }
  }
  for (VertexId v : d.spiders()) {
    bool first = true;
    for (VertexId w : d.neighbor_ids(v)) {
      if (!d.is_boundary(w)) continue;
      if (first) {
        first = false;
        continue;
      }
      detail::insert_spider_on_boundary(d, w, v);
    }
  }
  return d;
}

}  // namespace zxrl
