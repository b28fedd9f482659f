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

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "zxrl/circuit.hpp"
#include "zxrl/convert.hpp"
#include "zxrl/extract.hpp"
#include "zxrl/peephole.hpp"
#include "zxrl/ppo.hpp"
#include "zxrl/simplify.hpp"

namespace zxrl {

/// Mean total and two-qubit counts of one method at one sweep point.
struct MethodMeans {
  double total = 0;
  double two_qubit = 0;
};

/// One initial gate count of a sweep; `methods` lines up with the column
/// names returned alongside it.
struct SweepRow {
  int gates = 0;
  int samples = 0;
  std::vector<MethodMeans> methods;
};

struct Sweep {
  std::vector<std::string> method_names;
  std::vector<SweepRow> rows;
};

namespace detail {

template <typename Fn>
SweepRow sweep_point(int gates, int samples, std::uint64_t seed, int workers, std::size_t n_methods, Fn per_circuit) {
  const auto seeds = episode_seeds(seed ^ static_cast<std::uint64_t>(gates), samples);
  std::vector<std::vector<GateCount>> counts(static_cast<std::size_t>(samples));
  parallel_for(samples, workers, [&](int k) {
    const auto uk = static_cast<std::size_t>(k);
    counts[uk] = per_circuit(seeds[uk]);
  });
  SweepRow row;
  row.gates = gates;
  row.samples = samples;
  row.methods.assign(n_methods, {});
  for (const auto& cs : counts) {
    for (std::size_t m = 0; m < n_methods; ++m) {
      row.methods[m].total += static_cast<double>(cs[m].total);
      row.methods[m].two_qubit += static_cast<double>(cs[m].two_qubit);
    }
  }
  for (auto& m : row.methods) {
    m.total /= samples;
    m.two_qubit /= samples;
  }
  return row;
}

}  // namespace detail

/// Input circuit, peephole alone, reduce-all + extract, and reduce-all +
/// extract + peephole on random circuits. Clifford+T runs use gadget rules.
inline Sweep gate_sweep(int n_qubits, const std::vector<int>& gate_counts, GateSet set, int samples,
                        std::uint64_t seed, int workers = 1) {
  if (samples < 1) throw Error("sweep: samples must be positive");
  Sweep s;
  s.method_names = {"original", "original_pp", "reduce_all", "reduce_all_pp"};
  for (int g : gate_counts) {
    s.rows.push_back(detail::sweep_point(g, samples, seed, workers, 4, [&](std::uint64_t cs) {
      const Circuit c = random_circuit(n_qubits, g, set, cs);
      const Circuit r = extract(reduce_all(to_graph_like(circuit_to_diagram(c)), set == GateSet::CliffordT));
      return std::vector<GateCount>{count_gates(c), count_gates(peephole_optimize(c)), count_gates(r),
                                    count_gates(peephole_optimize(r))};
    }));
  }
  return s;
}

/// Agent, reduce-all and no-action (graph-like then extract) pipelines, each
/// with and without a trailing peephole pass.
inline Sweep agent_sweep(const nn::ActorNet& actor, const EnvConfig& env_base, const std::vector<int>& gate_counts,
                         int samples, std::uint64_t seed, EvalMode mode = EvalMode::Greedy, int workers = 1) {
  if (samples < 1) throw Error("sweep: samples must be positive");
  Sweep s;
  s.method_names = {"agent", "agent_pp", "reduce_all", "reduce_all_pp", "no_action", "no_action_pp"};
  for (int g : gate_counts) {
    EnvConfig env = env_base;
    env.n_gates = g;
    s.rows.push_back(detail::sweep_point(g, samples, seed, workers, 6, [&](std::uint64_t cs) {
      const Circuit c = random_circuit(env.n_qubits, g, env.gate_set, cs);
      const ZxDiagram gl = to_graph_like(circuit_to_diagram(c));
      const Circuit a = extract(agent_optimize(&actor, c, env, mode, cs ^ 0x2545f4914f6cdd1dULL));
      const Circuit r = extract(reduce_all(gl));
      const Circuit n = extract(gl);
      return std::vector<GateCount>{count_gates(a), count_gates(peephole_optimize(a)),
                                    count_gates(r), count_gates(peephole_optimize(r)),
                                    count_gates(n), count_gates(peephole_optimize(n))};
    }));
  }
  return s;
}

/// `gates,samples,<m>_total,<m>_2q,...` with four decimals.
inline std::string sweep_csv(const Sweep& s) {
  std::ostringstream os;
  os << "gates,samples";
  for (const auto& m : s.method_names) os << "," << m << "_total," << m << "_2q";
  os << "\n" << std::fixed << std::setprecision(4);
  for (const auto& r : s.rows) {
    os << r.gates << "," << r.samples;
    for (const auto& m : r.methods) os << "," << m.total << "," << m.two_qubit;
    os << "\n";
  }
  return os.str();
}

}  // namespace zxrl
