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
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zxrl/diagram.hpp"
#include "zxrl/error.hpp"

namespace zxrl {

/// Rank order used when sorting candidate actions.
enum class RuleTag : std::uint8_t {
  LocalComp = 0,
  Pivot = 1,
  BoundaryPivot = 2,
  IdentityRemove = 3,
  GadgetFusion = 4,
  Stop = 5,
};

inline const char* rule_name(RuleTag t) {
  switch (t) {
    case RuleTag::LocalComp: return "lcomp";
    case RuleTag::Pivot: return "pivot";
    case RuleTag::BoundaryPivot: return "boundary-pivot";
    case RuleTag::IdentityRemove: return "id";
    case RuleTag::GadgetFusion: return "gadget-fusion";
    case RuleTag::Stop: return "stop";
  }
  return "?";
}

inline std::optional<RuleTag> rule_from_name(const std::string& s) {
  for (auto t : {RuleTag::LocalComp, RuleTag::Pivot, RuleTag::BoundaryPivot,
                 RuleTag::IdentityRemove, RuleTag::GadgetFusion, RuleTag::Stop}) {
    if (s == rule_name(t)) return t;
  }
  return std::nullopt;
}

/// One candidate rewrite. `a`/`b` are the defining vertices:
/// LocalComp(a), Pivot(a, b) with a < b, BoundaryPivot(a = interior,
/// b = boundary spider), IdentityRemove(a), GadgetFusion(a = hub, b = hub).
struct RewriteAction {
  RuleTag tag = RuleTag::Stop;
  VertexId a = -1;
  VertexId b = -1;

  static RewriteAction stop() { return {}; }

  /// Number of diagram vertices the action is attached to.
  [[nodiscard]] int arity() const {
    switch (tag) {
      case RuleTag::LocalComp:
      case RuleTag::IdentityRemove: return 1;
      case RuleTag::Stop: return 0;
      default: return 2;
    }
  }

  friend bool operator==(const RewriteAction&, const RewriteAction&) = default;
  friend auto operator<=>(const RewriteAction&, const RewriteAction&) = default;
};

// -- gadgets -----------------------------------------------------------------

/// A degree-1 spider hanging off an interior Pauli "hub" spider.
[[nodiscard]] inline bool is_gadget_leaf(const ZxDiagram& d, VertexId l) {
  if (!d.has_vertex(l) || d.kind(l) != VertexKind::ZSpider || d.degree(l) != 1) {
    return false;
  }
  const auto [h, t] = *d.neighbors(l).begin();
  return t == EdgeType::Hadamard && d.is_interior(h) && d.phase(h).is_pauli() &&
         d.degree(h) >= 2;
}

/// Leaf of a hub with exactly one leaf, if `h` is such a hub.
[[nodiscard]] inline std::optional<VertexId> gadget_leaf(const ZxDiagram& d, VertexId h) {
  if (!d.has_vertex(h) || !d.is_interior(h) || !d.phase(h).is_pauli()) return std::nullopt;
  std::optional<VertexId> leaf;
  for (const auto& [w, t] : d.neighbors(h)) {
    if (d.degree(w) == 1 && is_gadget_leaf(d, w)) {
      if (leaf) return std::nullopt;
      leaf = w;
    }
  }
  return leaf;
}

[[nodiscard]] inline bool is_gadget_hub(const ZxDiagram& d, VertexId h) {
  if (!d.has_vertex(h) || !d.is_interior(h) || !d.phase(h).is_pauli()) return false;
  for (const auto& [w, t] : d.neighbors(h)) {
    if (d.degree(w) == 1 && is_gadget_leaf(d, w)) return true;
  }
  return false;
}

// -- preconditions -------------------------------------------------------------

namespace detail {

inline bool all_hadamard_to_z(const ZxDiagram& d, VertexId v) {
  for (const auto& [w, t] : d.neighbors(v)) {
    if (t != EdgeType::Hadamard || d.kind(w) != VertexKind::ZSpider) return false;
  }
  return true;
}

}  // namespace detail

[[nodiscard]] inline bool can_local_complement(const ZxDiagram& d, VertexId v) {
  return d.has_vertex(v) && d.is_interior(v) && d.phase(v).is_proper_clifford() &&
         detail::all_hadamard_to_z(d, v);
}

[[nodiscard]] inline bool can_pivot(const ZxDiagram& d, VertexId u, VertexId v) {
  if (u == v || !d.has_vertex(u) || !d.has_vertex(v)) return false;
  if (!d.is_interior(u) || !d.is_interior(v)) return false;
  if (!d.phase(u).is_pauli() || !d.phase(v).is_pauli()) return false;
  if (d.edge(u, v) != EdgeType::Hadamard) return false;
  return detail::all_hadamard_to_z(d, u) && detail::all_hadamard_to_z(d, v);
}

/// u interior Pauli spider, v a Hadamard neighbor of u carrying exactly one
/// boundary wire.
[[nodiscard]] inline bool can_boundary_pivot(const ZxDiagram& d, VertexId u, VertexId v) {
  if (u == v || !d.has_vertex(u) || !d.has_vertex(v)) return false;
  if (!d.is_interior(u) || !d.phase(u).is_pauli() || !detail::all_hadamard_to_z(d, u)) {
    return false;
  }
  if (d.kind(v) != VertexKind::ZSpider || d.edge(u, v) != EdgeType::Hadamard) return false;
  int bnd = 0;
  for (const auto& [w, t] : d.neighbors(v)) {
    if (d.is_boundary(w)) {
      ++bnd;
    } else if (t != EdgeType::Hadamard || d.kind(w) != VertexKind::ZSpider) {
      return false;
    }
  }
  return bnd == 1;
}

/// Phase-0 degree-2 Z-spider whose removal keeps every spider on at most
/// one boundary wire. By default both neighbors must be spiders; with
/// `allow_boundary` one of them may be a boundary, which is then rewired.
[[nodiscard]] inline bool can_identity_remove(const ZxDiagram& d, VertexId v,
                                              bool allow_boundary = false) {
  if (!d.has_vertex(v) || d.kind(v) != VertexKind::ZSpider) return false;
  if (!d.phase(v).is_zero() || d.degree(v) != 2) return false;
  auto it = d.neighbors(v).begin();
  const auto [a, ta] = *it++;
  const auto [b, tb] = *it;
  const bool ba = d.is_boundary(a), bb = d.is_boundary(b);
  if (ba && bb) return false;
  if (ba || bb) {
    if (!allow_boundary) return false;
    const VertexId spider = ba ? b : a;
    const EdgeType st = ba ? tb : ta;
    return d.kind(spider) == VertexKind::ZSpider && st == EdgeType::Hadamard &&
           !d.boundary_neighbor(spider);
  }
  if (d.kind(a) != VertexKind::ZSpider || d.kind(b) != VertexKind::ZSpider) return false;
  if (ta != EdgeType::Hadamard || tb != EdgeType::Hadamard) return false;
  return !(d.boundary_neighbor(a) && d.boundary_neighbor(b));
}

[[nodiscard]] inline bool can_gadget_fusion(const ZxDiagram& d, VertexId g1, VertexId g2) {
  if (g1 == g2) return false;
  const auto l1 = gadget_leaf(d, g1);
  const auto l2 = gadget_leaf(d, g2);
  if (!l1 || !l2) return false;
  auto rest = [&](VertexId h, VertexId l) {
    std::vector<VertexId> out;
    for (const auto& [w, t] : d.neighbors(h)) {
      if (w != l) out.push_back(w);
    }
    return out;
  };
  const auto n1 = rest(g1, *l1);
  return !n1.empty() && n1 == rest(g2, *l2);
}

/// Interior Pauli u (not a gadget hub) next to an interior non-Clifford v
/// that is not itself a gadget leaf.
[[nodiscard]] inline bool can_gadget_pivot(const ZxDiagram& d, VertexId u, VertexId v) {
  if (u == v || !d.has_vertex(u) || !d.has_vertex(v)) return false;
  if (!d.is_interior(u) || !d.is_interior(v)) return false;
  if (!d.phase(u).is_pauli() || d.phase(v).is_clifford()) return false;
  if (d.edge(u, v) != EdgeType::Hadamard || d.degree(v) < 2) return false;
  if (is_gadget_hub(d, u)) return false;
  return detail::all_hadamard_to_z(d, u) && detail::all_hadamard_to_z(d, v);
}

[[nodiscard]] inline bool is_applicable(const ZxDiagram& d, const RewriteAction& a) {
  switch (a.tag) {
    case RuleTag::LocalComp: return can_local_complement(d, a.a);
    case RuleTag::Pivot: return can_pivot(d, a.a, a.b);
    case RuleTag::BoundaryPivot: return can_boundary_pivot(d, a.a, a.b);
    case RuleTag::IdentityRemove: return can_identity_remove(d, a.a);
    case RuleTag::GadgetFusion: return can_gadget_fusion(d, a.a, a.b);
    case RuleTag::Stop: return true;
  }
  return false;
}

// -- rule bodies -----------------------------------------------------------------

namespace detail {

[[noreturn]] inline void reject(const char* rule, VertexId a, VertexId b = -1) {
  std::string msg = std::string(rule) + " not applicable at " + std::to_string(a);
  if (b >= 0) msg += "," + std::to_string(b);
  throw RejectedAction(msg);
}

/// Pivot on an adjacent pair of Pauli spiders whose neighbors are all
/// spiders: complement between the exclusive and common neighborhoods and
/// update phases, then delete u and v.
inline void pivot_core(ZxDiagram& d, VertexId u, VertexId v) {
  std::vector<VertexId> nu, nv, nc;
  for (const auto& [w, t] : d.neighbors(u)) {
    if (w == v) continue;
    (d.connected(v, w) ? nc : nu).push_back(w);
  }
  for (const auto& [w, t] : d.neighbors(v)) {
    if (w != u && !d.connected(u, w)) nv.push_back(w);
  }
  auto toggle_all = [&](const std::vector<VertexId>& xs, const std::vector<VertexId>& ys) {
    for (VertexId x : xs) {
      for (VertexId y : ys) d.toggle_hadamard(x, y);
    }
  };
  toggle_all(nu, nv);
  toggle_all(nu, nc);
  toggle_all(nv, nc);
  const Phase pu = d.phase(u), pv = d.phase(v);
  for (VertexId w : nu) d.add_to_phase(w, pv);
  for (VertexId w : nv) d.add_to_phase(w, pu);
  for (VertexId w : nc) d.add_to_phase(w, pu + pv + Phase::pi());
  d.remove_vertex(u);
  d.remove_vertex(v);
}

/// Moves the phase of v onto a fresh gadget: v(a) => v(0) -H- hub(0) -H- leaf(a).
/// Returns {hub, leaf}.
inline std::pair<VertexId, VertexId> gadgetize(ZxDiagram& d, VertexId v) {
  const VertexId hub = d.add_vertex(VertexKind::ZSpider);
  const VertexId leaf = d.add_vertex(VertexKind::ZSpider, d.phase(v));
  d.set_phase(v, Phase{});
  d.add_edge(v, hub, EdgeType::Hadamard);
  d.add_edge(hub, leaf, EdgeType::Hadamard);
  return {hub, leaf};
}

inline void lcomp_core(ZxDiagram& d, VertexId v) {
  const auto ns = d.neighbor_ids(v);
  const Phase p = d.phase(v);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    d.add_to_phase(ns[i], -p);
    for (std::size_t j = i + 1; j < ns.size(); ++j) d.toggle_hadamard(ns[i], ns[j]);
  }
  d.remove_vertex(v);
}

}  // namespace detail

/// Removes a +-pi/2 interior spider, complementing its neighborhood and
/// subtracting its phase from every neighbor.
inline void local_complement_in_place(ZxDiagram& d, VertexId v) {
  if (!can_local_complement(d, v)) detail::reject("lcomp", v);
  detail::lcomp_core(d, v);
}

inline void pivot_in_place(ZxDiagram& d, VertexId u, VertexId v) {
  if (!can_pivot(d, u, v)) detail::reject("pivot", u, v);
  detail::pivot_core(d, u, v);
}

/// Splits v's boundary wire with a phase-0 spider so v becomes interior,
/// then pivots u with v. A non-Pauli phase on v is first moved onto a phase
/// gadget; when that phase is +-pi/2 the gadget is removed again by two
/// local complementations, so Clifford diagrams never keep gadgets.
inline void boundary_pivot_in_place(ZxDiagram& d, VertexId u, VertexId v) {
  if (!can_boundary_pivot(d, u, v)) detail::reject("boundary-pivot", u, v);
  std::optional<std::pair<VertexId, VertexId>> gadget;
  if (!d.phase(v).is_pauli()) gadget = detail::gadgetize(d, v);
  const VertexId b = *d.boundary_neighbor(v);
  const EdgeType t = *d.edge(v, b);
  d.remove_edge(v, b);
  const VertexId z = d.add_vertex(VertexKind::ZSpider);
  d.add_edge(v, z, EdgeType::Hadamard);
  d.add_edge(z, b, toggled(t));
  detail::pivot_core(d, u, v);
  if (gadget && d.phase(gadget->second).is_proper_clifford()) {
    detail::lcomp_core(d, gadget->second);
    detail::lcomp_core(d, gadget->first);
  }
}

/// Removes a phase-0 degree-2 spider. Between two spiders the Hadamard
/// pair becomes a plain wire and the neighbors fuse; next to a boundary the
/// boundary is rewired straight onto the remaining spider.
inline void identity_remove_in_place(ZxDiagram& d, VertexId v) {
  if (!can_identity_remove(d, v, true)) detail::reject("id", v);
  auto it = d.neighbors(v).begin();
  const auto [a, ta] = *it++;
  const auto [b, tb] = *it;
  d.remove_vertex(v);
  if (d.is_boundary(a) || d.is_boundary(b)) {
    const VertexId bnd = d.is_boundary(a) ? a : b;
    const VertexId spider = d.is_boundary(a) ? b : a;
    const EdgeType bt = d.is_boundary(a) ? ta : tb;
    d.add_edge(spider, bnd, toggled(bt));
    return;
  }
  detail::fuse_into(d, std::min(a, b), std::max(a, b));
}

/// Merges two phase gadgets on the same neighbor set into one whose phase
/// is the sum. Hubs carrying pi are folded into their leaf's sign first.
inline void gadget_fusion_in_place(ZxDiagram& d, VertexId g1, VertexId g2) {
  if (!can_gadget_fusion(d, g1, g2)) detail::reject("gadget-fusion", g1, g2);
  const VertexId l1 = *gadget_leaf(d, g1);
  const VertexId l2 = *gadget_leaf(d, g2);
  auto effective = [&](VertexId h, VertexId l) {
    return d.phase(h).is_zero() ? d.phase(l) : -d.phase(l);
  };
  const Phase total = effective(g1, l1) + effective(g2, l2);
  d.set_phase(g1, Phase{});
  d.set_phase(l1, total);
  d.remove_vertex(l2);
  d.remove_vertex(g2);
}

/// Pivot of an interior Pauli spider with an interior non-Clifford spider;
/// the non-Clifford phase survives on a new phase gadget.
inline void gadget_pivot_in_place(ZxDiagram& d, VertexId u, VertexId v) {
  if (!can_gadget_pivot(d, u, v)) detail::reject("gadget-pivot", u, v);
  detail::gadgetize(d, v);
  detail::pivot_core(d, u, v);
}

inline void apply_in_place(ZxDiagram& d, const RewriteAction& a) {
  switch (a.tag) {
    case RuleTag::LocalComp: local_complement_in_place(d, a.a); break;
    case RuleTag::Pivot: pivot_in_place(d, a.a, a.b); break;
    case RuleTag::BoundaryPivot: boundary_pivot_in_place(d, a.a, a.b); break;
    case RuleTag::IdentityRemove: identity_remove_in_place(d, a.a); break;
    case RuleTag::GadgetFusion: gadget_fusion_in_place(d, a.a, a.b); break;
    case RuleTag::Stop: break;
  }
}

// Value-returning forms: the input diagram is left untouched.
[[nodiscard]] inline ZxDiagram local_complement(ZxDiagram d, VertexId v) {
  local_complement_in_place(d, v);
  return d;
}
[[nodiscard]] inline ZxDiagram pivot(ZxDiagram d, VertexId u, VertexId v) {
  pivot_in_place(d, u, v);
  return d;
}
[[nodiscard]] inline ZxDiagram boundary_pivot(ZxDiagram d, VertexId u, VertexId v) {
  boundary_pivot_in_place(d, u, v);
  return d;
}
[[nodiscard]] inline ZxDiagram identity_remove(ZxDiagram d, VertexId v) {
  identity_remove_in_place(d, v);
  return d;
}
[[nodiscard]] inline ZxDiagram gadget_fusion(ZxDiagram d, VertexId g1, VertexId g2) {
  gadget_fusion_in_place(d, g1, g2);
  return d;
}
[[nodiscard]] inline ZxDiagram apply(ZxDiagram d, const RewriteAction& a) {
  apply_in_place(d, a);
  return d;
}

/// Every applicable action, sorted by (rule rank, vertex ids); Stop is last.
[[nodiscard]] inline std::vector<RewriteAction> enumerate_actions(const ZxDiagram& d,
                                                                  bool include_gadgets = false) {
  std::vector<RewriteAction> out;
  const auto spiders = d.spiders();
  for (VertexId v : spiders) {
    if (can_local_complement(d, v)) out.push_back({RuleTag::LocalComp, v, -1});
  }
  for (VertexId u : spiders) {
    if (!d.is_interior(u) || !d.phase(u).is_pauli()) continue;
    for (const auto& [v, t] : d.neighbors(u)) {
      if (v > u && can_pivot(d, u, v)) out.push_back({RuleTag::Pivot, u, v});
    }
  }
  for (VertexId u : spiders) {
    if (!d.is_interior(u) || !d.phase(u).is_pauli()) continue;
    for (const auto& [v, t] : d.neighbors(u)) {
      if (can_boundary_pivot(d, u, v)) out.push_back({RuleTag::BoundaryPivot, u, v});
    }
  }
  for (VertexId v : spiders) {
    if (can_identity_remove(d, v)) out.push_back({RuleTag::IdentityRemove, v, -1});
  }
  if (include_gadgets) {
    std::vector<VertexId> hubs;
    for (VertexId v : spiders) {
      if (gadget_leaf(d, v)) hubs.push_back(v);
    }
    for (std::size_t i = 0; i < hubs.size(); ++i) {
      for (std::size_t j = i + 1; j < hubs.size(); ++j) {
        if (can_gadget_fusion(d, hubs[i], hubs[j])) {
          out.push_back({RuleTag::GadgetFusion, hubs[i], hubs[j]});
        }
      }
    }
  }
  out.push_back(RewriteAction::stop());
  return out;
}

}  // namespace zxrl
