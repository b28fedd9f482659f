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
#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "zxrl/diagram.hpp"
#include "zxrl/rewrite.hpp"

namespace zxrl {

struct ReduceOptions {
  bool gadgets = false;
  /// When set, every sweep visits candidates in a seeded random order.
  std::optional<std::uint64_t> shuffle_seed;
  /// Records every applied agent-visible action (lcomp, pivot, boundary
  /// pivot, id) in order. Gadget steps are not recorded.
  std::vector<RewriteAction>* trace = nullptr;
};

/// Removes spiders that cannot reach any boundary; they only carry a scalar.
inline bool drop_scalar_components(ZxDiagram& d) {
  std::set<VertexId> seen;
  std::queue<VertexId> todo;
  for (VertexId b : d.inputs()) todo.push(b), seen.insert(b);
  for (VertexId b : d.outputs()) todo.push(b), seen.insert(b);
  while (!todo.empty()) {
    const VertexId v = todo.front();
    todo.pop();
    for (const auto& [w, t] : d.neighbors(v)) {
      if (seen.insert(w).second) todo.push(w);
    }
  }
  bool changed = false;
  for (VertexId v : d.vertices()) {
    if (!seen.contains(v)) {
      d.remove_vertex(v);
      changed = true;
    }
  }
  return changed;
}

namespace detail {

class Sweeper {
 public:
  Sweeper(ZxDiagram& d, const ReduceOptions& opt) : d_(d), opt_(opt) {
    if (opt.shuffle_seed) rng_.seed(*opt.shuffle_seed);
  }

  void order(std::vector<VertexId>& xs) {
    if (opt_.shuffle_seed) std::shuffle(xs.begin(), xs.end(), rng_);
  }
  template <class T>
  void order_pairs(std::vector<T>& xs) {
    if (opt_.shuffle_seed) std::shuffle(xs.begin(), xs.end(), rng_);
  }

  void record(RuleTag tag, VertexId a, VertexId b = -1) {
    if (opt_.trace) opt_.trace->push_back({tag, a, b});
  }

  bool identities() {
    bool any = false;
    for (;;) {
      auto vs = d_.spiders();
      order(vs);
      bool hit = false;
      for (VertexId v : vs) {
        if (can_identity_remove(d_, v)) {
          record(RuleTag::IdentityRemove, v);
          identity_remove_in_place(d_, v);
          hit = any = true;
        }
      }
      if (!hit) return any;
    }
  }

  bool lcomps() {
    bool any = false;
    auto vs = d_.spiders();
    order(vs);
    for (VertexId v : vs) {
      if (can_local_complement(d_, v)) {
        record(RuleTag::LocalComp, v);
        local_complement_in_place(d_, v);
        any = true;
      }
    }
    return any;
  }

  std::vector<std::pair<VertexId, VertexId>> adjacent_pairs(bool both_ways) {
    std::vector<std::pair<VertexId, VertexId>> ps;
    for (VertexId u : d_.spiders()) {
      for (const auto& [v, t] : d_.neighbors(u)) {
        if (both_ways || u < v) ps.emplace_back(u, v);
      }
    }
    order_pairs(ps);
    return ps;
  }

  bool pivots() {
    bool any = false;
    for (const auto& [u, v] : adjacent_pairs(false)) {
      if (can_pivot(d_, u, v)) {
        record(RuleTag::Pivot, u, v);
        pivot_in_place(d_, u, v);
        any = true;
      }
    }
    return any;
  }

  bool gadget_pivots() {
    bool any = false;
    for (const auto& [u, v] : adjacent_pairs(true)) {
      if (can_gadget_pivot(d_, u, v)) {
        gadget_pivot_in_place(d_, u, v);
        any = true;
      }
    }
    return any;
  }

  bool gadget_fusions() {
    bool any = false;
    std::vector<VertexId> hubs;
    for (VertexId v : d_.spiders()) {
      if (gadget_leaf(d_, v)) hubs.push_back(v);
    }
    for (std::size_t i = 0; i < hubs.size(); ++i) {
      for (std::size_t j = i + 1; j < hubs.size(); ++j) {
        if (can_gadget_fusion(d_, hubs[i], hubs[j])) {
          gadget_fusion_in_place(d_, hubs[i], hubs[j]);
          any = true;
        }
      }
    }
    return any;
  }

  /// Boundary pivots whose boundary spider carries a Clifford phase; each
  /// one removes exactly one spider.
  bool boundary_pivots() {
    bool any = false;
    for (const auto& [u, v] : adjacent_pairs(true)) {
      if (!d_.has_vertex(v) || !d_.phase(v).is_clifford()) continue;
      if (can_boundary_pivot(d_, u, v)) {
        record(RuleTag::BoundaryPivot, u, v);
        boundary_pivot_in_place(d_, u, v);
        any = true;
      }
    }
    return any;
  }

 private:
  ZxDiagram& d_;
  const ReduceOptions& opt_;
  std::mt19937_64 rng_;
};

}  // namespace detail

/// Terminating apply-all simplifier. Interior phase: identity removal and
/// fusion, then all local complementations, then all pivots (plus gadget
/// pivots and gadget fusion when enabled), repeated until nothing changes.
/// Boundary pivots then run, and the interior phase restarts whenever they
/// changed the diagram. On Clifford input no interior spider survives.
inline void reduce_all_in_place(ZxDiagram& d, const ReduceOptions& opt = {}) {
  detail::Sweeper s(d, opt);
  for (;;) {
    for (;;) {
      bool changed = s.identities();
      changed |= drop_scalar_components(d);
      changed |= s.lcomps();
      changed |= s.pivots();
      if (opt.gadgets) {
        changed |= s.gadget_pivots();
        changed |= s.gadget_fusions();
      }
      if (!changed) break;
    }
    if (!s.boundary_pivots()) break;
  }
}

[[nodiscard]] inline ZxDiagram reduce_all(ZxDiagram d, bool gadgets = false) {
  ReduceOptions opt;
  opt.gadgets = gadgets;
  reduce_all_in_place(d, opt);
  return d;
}

[[nodiscard]] inline ZxDiagram reduce_all(ZxDiagram d, const ReduceOptions& opt) {
  reduce_all_in_place(d, opt);
  return d;
}

}  // namespace zxrl
