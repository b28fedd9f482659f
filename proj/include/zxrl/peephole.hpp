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

#include <optional>
#include <vector>

#include "zxrl/circuit.hpp"

namespace zxrl {

namespace detail {

// Whether `later` may be moved before `g` while searching for a partner of g.
inline bool rz_commutes_with(int q, const Gate& later) {
  switch (later.kind) {
    case GateKind::CZ: return true;
    case GateKind::CNOT: return later.q0 == q;
    default: return false;
  }
}

inline bool cnot_commutes_with(const Gate& cx, const Gate& later) {
  const int c = cx.q0, t = cx.q1;
  switch (later.kind) {
    case GateKind::Rz: return later.q0 == c;
    case GateKind::CZ:
      return !later.acts_on(t);
    case GateKind::CNOT:
      // Shared control only, or shared target only.
      return (later.q0 == c && later.q1 != t) || (later.q1 == t && later.q0 != c);
    default: return false;
  }
}

inline bool cz_commutes_with(const Gate& cz, const Gate& later) {
  switch (later.kind) {
    case GateKind::Rz:
    case GateKind::CZ: return true;
    case GateKind::CNOT: return !cz.acts_on(later.q1);
    default: return false;
  }
}

inline bool same_cz(const Gate& a, const Gate& b) {
  return b.kind == GateKind::CZ &&
         ((a.q0 == b.q0 && a.q1 == b.q1) || (a.q0 == b.q1 && a.q1 == b.q0));
}

inline bool overlaps(const Gate& a, const Gate& b) {
  return b.acts_on(a.q0) || (a.q1 >= 0 && b.acts_on(a.q1));
}

// One left-to-right sweep; returns true if anything changed.
inline bool peephole_sweep(std::vector<std::optional<Gate>>& gs) {
  bool changed = false;
  const std::size_t n = gs.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!gs[i]) continue;
    const Gate g = *gs[i];
    if (g.kind == GateKind::Rz && g.phase.is_zero()) {
      gs[i].reset();
      changed = true;
      continue;
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!gs[j] || !overlaps(g, *gs[j])) continue;
      Gate& h = *gs[j];
      bool stop = true;
      switch (g.kind) {
        case GateKind::H:
          if (h.kind == GateKind::H) {
            gs[i].reset();
            gs[j].reset();
            changed = true;
          }
          break;
        case GateKind::Rz:
          if (h.kind == GateKind::Rz) {
            h.phase += g.phase;
            gs[i].reset();
            if (h.phase.is_zero()) gs[j].reset();
            changed = true;
          } else if (rz_commutes_with(g.q0, h)) {
            stop = false;
          }
          break;
        case GateKind::CNOT:
          if (h == g) {
            gs[i].reset();
            gs[j].reset();
            changed = true;
          } else if (cnot_commutes_with(g, h)) {
            stop = false;
          }
          break;
        case GateKind::CZ:
          if (same_cz(g, h)) {
            gs[i].reset();
            gs[j].reset();
            changed = true;
          } else if (cz_commutes_with(g, h)) {
            stop = false;
          }
          break;
      }
      if (stop) break;
    }
  }
  return changed;
}

}  // namespace detail

/// Minimal gate-level cleanup run to a fixed point: H.H, CNOT.CNOT and
/// CZ.CZ cancellation and Rz merging, where Rz may slide through CZ and
/// CNOT controls and diagonal/commuting two-qubit gates may slide past each
/// other to meet their partner.
[[nodiscard]] inline Circuit peephole_optimize(const Circuit& c) {
  std::vector<std::optional<Gate>> gs(c.gates.begin(), c.gates.end());
  while (detail::peephole_sweep(gs)) {
  }
  Circuit out(c.n_qubits);
  for (const auto& g : gs) {
    if (g) out.gates.push_back(*g);
  }
  return out;
}

}  // namespace zxrl
