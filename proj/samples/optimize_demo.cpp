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

// Optimizes one random circuit with reduce-all and with a short-trained
// agent, then checks both results against the input.

#include <iostream>

#include "zxrl/zxrl.hpp"

int main() {
  using namespace zxrl;
  const Circuit c = random_circuit(5, 25, GateSet::Clifford, 2026);
  std::cout << "input: " << c.gates.size() << " gates\n";

  const ZxDiagram g = to_graph_like(circuit_to_diagram(c));
  const Circuit plain = extract(g);
  const Circuit reduced = extract(reduce_all(g));
  std::cout << "graph-like + extract: " << plain.gates.size() << " gates\n"
            << "reduce-all + extract: " << reduced.gates.size() << " gates, peephole "
            << peephole_optimize(reduced).gates.size() << "\n";

  PpoConfig ppo;
  ppo.num_steps = 64;
  ppo.num_envs = 4;
  ppo.minibatch_size = 64;
  ppo.num_epochs = 4;
  ppo.total_steps = 4 * 64 * 4;
  EnvConfig env;
  nn::NetConfig net;
  net.hidden = 16;
  const TrainResult r = train(ppo, env, net);
  std::cout << "trained " << r.metrics.size() << " updates, last mean return " << r.metrics.back().mean_return
            << "\n";

  int steps = 0;
  const Circuit agent = extract(agent_optimize(&r.checkpoint.actor, c, env, EvalMode::Greedy, 0, &steps));
  std::cout << "agent (" << steps << " steps) + extract: " << agent.gates.size() << " gates\n";

  const bool ok = equivalent_clifford(c, reduced) && equivalent_clifford(c, agent);
  std::cout << (ok ? "all outputs equivalent to the input\n" : "MISMATCH\n");
  return ok ? 0 : 1;
}
