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
#include <map>
#include <iterator>
#include <numeric>
#include <optional>
#include <vector>

#include "zxrl/circuit.hpp"
#include "zxrl/diagram.hpp"
#include "zxrl/error.hpp"
#include "zxrl/rewrite.hpp"

namespace zxrl {

namespace detail {

/// Circuit built from the outputs backwards; `finish` restores gate order.
/// An H meeting another H with nothing else on that qubit in between
/// cancels instead of being appended.
struct ReversedCircuit {
  int n = 0;
  std::vector<Gate> gates;
  void push(Gate g) {
    if (g.kind == GateKind::H) {
      for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        if (!it->acts_on(g.q0)) continue;
        if (it->kind == GateKind::H) {
          gates.erase(std::next(it).base());
          return;
        }
        break;
      }
    }
    gates.push_back(g);
  }
  Circuit finish() && {
    std::reverse(gates.begin(), gates.end());
    return Circuit{n, std::move(gates)};
  }
};

using Row = std::vector<std::uint8_t>;

/// Adds row `src` into row `dst` of a frontier biadjacency matrix. At the
/// output side this is a CNOT with control on dst's qubit and target on
/// src's qubit.
inline void row_add(std::vector<Row>& m, std::size_t src, std::size_t dst,
                    const std::vector<int>& qubit, ReversedCircuit& out) {
  for (std::size_t c = 0; c < m[dst].size(); ++c) m[dst][c] ^= m[src][c];
  out.push(CNOT(qubit[dst], qubit[src]));
}

inline int weight(const Row& r) {
  return static_cast<int>(std::count(r.begin(), r.end(), std::uint8_t{1}));
}

/// Gauss-Jordan elimination over GF(2). Pivot rows are picked by lowest
/// weight and never swapped, so every operation is a single row addition.
inline void gauss_jordan(std::vector<Row>& m, const std::vector<int>& qubit,
                         ReversedCircuit& out) {
  if (m.empty()) return;
  const std::size_t cols = m[0].size();
  std::vector<bool> used(m.size(), false);
  for (std::size_t c = 0; c < cols; ++c) {
    std::optional<std::size_t> piv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (used[r] || !m[r][c]) continue;
      if (!piv || weight(m[r]) < weight(m[*piv])) piv = r;
    }
    if (!piv) continue;
    used[*piv] = true;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r != *piv && m[r][c]) row_add(m, *piv, r, qubit, out);
    }
  }
}

/// Permutation from wire p (input side) to wire sigma[p] (output side) as
/// CNOT-synthesized swaps, appended in reverse order.
inline void emit_permutation(const std::vector<int>& sigma, ReversedCircuit& out) {
  const int n = static_cast<int>(sigma.size());
  std::vector<int> at(n);  // at[loc] = original wire currently at loc
  std::iota(at.begin(), at.end(), 0);
  std::vector<std::pair<int, int>> swaps;
  for (int q = 0; q < n; ++q) {
    const int want = static_cast<int>(std::find(sigma.begin(), sigma.end(), q) - sigma.begin());
    const int loc = static_cast<int>(std::find(at.begin(), at.end(), want) - at.begin());
    if (loc != q) {
      swaps.emplace_back(loc, q);
      std::swap(at[loc], at[q]);
    }
  }
  for (auto it = swaps.rbegin(); it != swaps.rend(); ++it) {
    out.push(CNOT(it->first, it->second));
    out.push(CNOT(it->second, it->first));
    out.push(CNOT(it->first, it->second));
  }
}

inline bool has_leaf(const ZxDiagram& d, VertexId w) {
  if (!d.is_interior(w)) return false;
  for (const auto& [l, t] : d.neighbors(w)) {
    if (d.degree(l) == 1 && d.kind(l) == VertexKind::ZSpider) return true;
  }
  return false;
}

}  // namespace detail

/// Turns a graph-like diagram with gflow back into a circuit over
/// {H, Rz, CNOT, CZ}. Works from the outputs inwards: frontier phases become
/// Rz, frontier-frontier wires CZ, and GF(2) row reduction of the frontier
/// biadjacency matrix yields CNOTs until some frontier spider has a single
/// neighbor it can step onto (emitting H). Gadget hubs reaching the frontier
/// are rewritten away first. Spiders unreachable from the outputs are
/// ignored.
[[nodiscard]] inline Circuit extract(ZxDiagram d) {
  const auto outputs = d.outputs();
  const auto inputs = d.inputs();
  const int n = static_cast<int>(outputs.size());
  if (inputs.size() != outputs.size()) throw Unsupported("extraction needs as many inputs as outputs");
  detail::ReversedCircuit out;
  out.n = n;
  std::vector<VertexId> frontier(n);

  auto neighbor_of = [&](VertexId b) {
    if (d.degree(b) != 1) throw ExtractionStalled("boundary " + std::to_string(b) + " lost its wire");
    return d.neighbors(b).begin()->first;
  };
  auto is_input = [&](VertexId v) { return d.is_input(v); };

  std::size_t guard = 0;
  for (;;) {
    if (++guard > 100000) throw ExtractionStalled("extraction does not converge");
    // Outputs: make every output wire plain and find the frontier.
    for (int q = 0; q < n; ++q) {
      const VertexId o = outputs[q];
      const VertexId v = neighbor_of(o);
      if (d.is_boundary(v)) throw ExtractionStalled("output wired to a boundary");
      if (*d.edge(o, v) == EdgeType::Hadamard) {
        out.push(H(q));
        d.set_edge_type(o, v, EdgeType::Simple);
      }
      frontier[q] = v;
    }
    std::map<VertexId, int> qubit_of;
    for (int q = 0; q < n; ++q) qubit_of[frontier[q]] = q;
    if (static_cast<int>(qubit_of.size()) != n) throw ExtractionStalled("frontier spider shared by two outputs");

    // Phases and frontier-frontier wires.
    for (int q = 0; q < n; ++q) {
      const VertexId v = frontier[q];
      if (!d.phase(v).is_zero()) {
        out.push(Rz(q, d.phase(v)));
        d.set_phase(v, Phase{});
      }
    }
    for (int q = 0; q < n; ++q) {
      const VertexId v = frontier[q];
      for (VertexId w : d.neighbor_ids(v)) {
        auto it = qubit_of.find(w);
        if (it == qubit_of.end() || it->second < q) continue;
        if (*d.edge(v, w) != EdgeType::Hadamard) throw ExtractionStalled("simple frontier wire");
        out.push(CZ(q, it->second));
        d.remove_edge(v, w);
      }
    }

    // A frontier spider still tied to an input but with other neighbors
    // gets a fresh spider on its input wire.
    bool finished = true;
    for (int q = 0; q < n; ++q) {
      const VertexId v = frontier[q];
      std::optional<VertexId> in;
      std::size_t others = 0;
      for (const auto& [w, t] : d.neighbors(v)) {
        if (is_input(w)) {
          in = w;
        } else if (!d.is_boundary(w)) {
          ++others;
        }
      }
      if (in && others > 0) {
        detail::insert_spider_on_boundary(d, *in, v);
        in.reset();
      }
      if (!in) finished = false;
    }
    if (finished) break;

    // Spiders next to the frontier that carry a degree-1 leaf (gadget hubs,
    // or former hubs turned +-pi/2 by a local complementation) can never be
    // stepped onto; they are removed first, by a boundary pivot through the
    // frontier when Pauli and by local complementation otherwise.
    bool rewrote = false;
    for (int q = 0; q < n && !rewrote; ++q) {
      const VertexId v = frontier[q];
      for (VertexId w : d.neighbor_ids(v)) {
        if (!detail::has_leaf(d, w)) continue;
        if (can_boundary_pivot(d, w, v)) {
          boundary_pivot_in_place(d, w, v);
        } else if (can_local_complement(d, w)) {
          local_complement_in_place(d, w);
        } else {
          continue;
        }
        rewrote = true;
        break;
      }
    }
    if (rewrote) continue;

    // Biadjacency between frontier and its spider neighbors.
    std::vector<VertexId> cols;
    std::vector<std::size_t> rows_q;
    for (int q = 0; q < n; ++q) {
      for (const auto& [w, t] : d.neighbors(frontier[q])) {
        if (!d.is_boundary(w)) cols.push_back(w);
      }
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    std::vector<detail::Row> m;
    std::vector<int> row_qubit;
    for (int q = 0; q < n; ++q) {
      detail::Row r(cols.size(), 0);
      bool any = false;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (d.connected(frontier[q], cols[c])) r[c] = 1, any = true;
      }
      if (any) {
        m.push_back(std::move(r));
        row_qubit.push_back(q);
      }
    }
    auto has_unit_row = [&] {
      return std::any_of(m.begin(), m.end(), [](const detail::Row& r) { return detail::weight(r) == 1; });
    };
    if (!has_unit_row()) {
      detail::gauss_jordan(m, row_qubit, out);
      for (std::size_t r = 0; r < m.size(); ++r) {
        const VertexId v = frontier[row_qubit[r]];
        for (std::size_t c = 0; c < cols.size(); ++c) {
          const bool want = m[r][c] != 0;
          if (want != d.connected(v, cols[c])) d.toggle_hadamard(v, cols[c]);
        }
      }
    }

    bool advanced = false;
    std::vector<bool> col_taken(cols.size(), false);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (detail::weight(m[r]) != 1) continue;
      const std::size_t c = static_cast<std::size_t>(std::find(m[r].begin(), m[r].end(), 1) - m[r].begin());
      if (col_taken[c]) continue;
      col_taken[c] = true;
      const int q = row_qubit[r];
      const VertexId v = frontier[q];
      const VertexId w = cols[c];
      out.push(H(q));
      d.remove_vertex(v);
      d.add_edge(w, outputs[q], EdgeType::Simple);
      advanced = true;
    }
    if (advanced) continue;

    throw ExtractionStalled("no extractable frontier spider");
  }

  // Every frontier spider now joins one input to one output.
  std::vector<int> sigma(n, -1);
  std::vector<bool> needs_h(n, false);
  for (int q = 0; q < n; ++q) {
    const VertexId v = frontier[q];
    for (const auto& [w, t] : d.neighbors(v)) {
      if (!is_input(w)) continue;
      const int p = static_cast<int>(std::find(inputs.begin(), inputs.end(), w) - inputs.begin());
      sigma[p] = q;
      needs_h[p] = t == EdgeType::Hadamard;
    }
  }
  if (std::find(sigma.begin(), sigma.end(), -1) != sigma.end()) {
    throw ExtractionStalled("inputs not matched to outputs");
  }
  detail::emit_permutation(sigma, out);
  for (int p = 0; p < n; ++p) {
    if (needs_h[p]) out.push(H(p));
  }
  return std::move(out).finish();
}

}  // namespace zxrl
