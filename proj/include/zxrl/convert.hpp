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

#include <vector>

#include "zxrl/circuit.hpp"
#include "zxrl/diagram.hpp"

namespace zxrl {

/// Standard ZX encoding: H toggles the pending wire type, Rz is a Z-spider,
/// CNOT is a Z (control) and X (target) pair joined by a simple wire, CZ is
/// two Z-spiders joined by a Hadamard wire. The result is generally not
/// graph-like.
[[nodiscard]] inline ZxDiagram circuit_to_diagram(const Circuit& c) {
  validate(c);
  const int n = c.n_qubits;
  ZxDiagram d;
  std::vector<VertexId> inputs;
  for (int q = 0; q < n; ++q) inputs.push_back(d.add_vertex(VertexKind::Boundary));
  std::vector<VertexId> last = inputs;
  std::vector<EdgeType> pending(static_cast<std::size_t>(n), EdgeType::Simple);

  auto append = [&](int q, VertexKind k, Phase p) {
    const VertexId v = d.add_vertex(k, p);
    d.add_edge(last[q], v, pending[q]);
    last[q] = v;
    pending[q] = EdgeType::Simple;
    return v;
  };

  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::H:
        pending[g.q0] = toggled(pending[g.q0]);
        break;
      case GateKind::Rz:
        append(g.q0, VertexKind::ZSpider, g.phase);
        break;
      case GateKind::CNOT: {
        const VertexId a = append(g.q0, VertexKind::ZSpider, {});
        const VertexId b = append(g.q1, VertexKind::XSpider, {});
        d.add_edge(a, b, EdgeType::Simple);
        break;
      }
      case GateKind::CZ: {
        const VertexId a = append(g.q0, VertexKind::ZSpider, {});
        const VertexId b = append(g.q1, VertexKind::ZSpider, {});
        d.add_edge(a, b, EdgeType::Hadamard);
        break;
      }
    }
  }

  std::vector<VertexId> outputs;
  for (int q = 0; q < n; ++q) {
    const VertexId o = d.add_vertex(VertexKind::Boundary);
    d.add_edge(last[q], o, pending[q]);
    outputs.push_back(o);
  }
  d.set_inputs(std::move(inputs));
  d.set_outputs(std::move(outputs));
  return d;
}

}  // namespace zxrl
