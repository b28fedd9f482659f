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
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "zxrl/error.hpp"
#include "zxrl/phase.hpp"

namespace zxrl {

enum class GateKind : std::uint8_t { H, Rz, CNOT, CZ };

/// One gate of the {H, Rz(k pi/4), CNOT, CZ} gate set. For CNOT `q0` is the
/// control and `q1` the target; single-qubit gates leave `q1` at -1.
struct Gate {
  GateKind kind = GateKind::H;
  int q0 = 0;
  int q1 = -1;
  Phase phase;

  [[nodiscard]] bool is_two_qubit() const {
    return kind == GateKind::CNOT || kind == GateKind::CZ;
  }
  [[nodiscard]] bool acts_on(int q) const { return q0 == q || q1 == q; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

inline Gate H(int q) { return {GateKind::H, q, -1, {}}; }
inline Gate Rz(int q, Phase p) { return {GateKind::Rz, q, -1, p}; }
inline Gate S(int q) { return Rz(q, Phase(2)); }
inline Gate Sdg(int q) { return Rz(q, Phase(6)); }
inline Gate Z(int q) { return Rz(q, Phase(4)); }
inline Gate T(int q) { return Rz(q, Phase(1)); }
inline Gate Tdg(int q) { return Rz(q, Phase(7)); }
inline Gate CNOT(int control, int target) {
  return {GateKind::CNOT, control, target, {}};
}
inline Gate CZ(int a, int b) { return {GateKind::CZ, a, b, {}}; }

/// Inverse gate (all gates here are self-inverse except Rz).
inline Gate inverse(const Gate& g) {
  Gate out = g;
  if (g.kind == GateKind::Rz) out.phase = -g.phase;
  return out;
}

struct Circuit {
  int n_qubits = 1;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(int n, std::vector<Gate> g = {}) : n_qubits(n), gates(std::move(g)) {}

  Circuit& add(const Gate& g) {
    gates.push_back(g);
    return *this;
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Throws if a gate violates the width or distinct-qubit invariants.
inline void validate(const Circuit& c) {
  if (c.n_qubits < 1) throw Error("circuit needs at least one qubit");
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    const bool two = g.is_two_qubit();
    if (g.q0 < 0 || g.q0 >= c.n_qubits || (two && (g.q1 < 0 || g.q1 >= c.n_qubits))) {
      throw Error("gate " + std::to_string(i) + " out of range");
    }
    if (two && g.q0 == g.q1) throw Error("gate " + std::to_string(i) + " repeats a qubit");
  }
}

inline Circuit inverse(const Circuit& c) {
  Circuit out(c.n_qubits);
  out.gates.reserve(c.gates.size());
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) out.gates.push_back(inverse(*it));
  return out;
}

struct GateCount {
  std::size_t total = 0;
  std::size_t two_qubit = 0;
  std::size_t t_count = 0;
  std::size_t h_count = 0;
  friend bool operator==(const GateCount&, const GateCount&) = default;
};

inline GateCount count_gates(const Circuit& c) {
  GateCount n;
  n.total = c.gates.size();
  for (const Gate& g : c.gates) {
    if (g.is_two_qubit()) ++n.two_qubit;
    if (g.kind == GateKind::Rz && !g.phase.is_clifford()) ++n.t_count;
    if (g.kind == GateKind::H) ++n.h_count;
  }
  return n;
}

enum class GateSet : std::uint8_t { Clifford, CliffordT };

/// Random circuit with gate types drawn uniformly from {S, H, CNOT} or
/// {S, T, H, CNOT} and qubits drawn uniformly without replacement.
inline Circuit random_circuit(int n_qubits, int n_gates, GateSet set,
                              std::uint64_t seed) {
  if (n_qubits < 1 || n_gates < 0) throw Error("random_circuit: bad size");
  std::mt19937_64 rng(seed);
  const int n_types = set == GateSet::Clifford ? 3 : 4;
  std::uniform_int_distribution<int> type_dist(0, n_types - 1);
  std::uniform_int_distribution<int> qubit_dist(0, n_qubits - 1);
  Circuit c(n_qubits);
  c.gates.reserve(static_cast<std::size_t>(n_gates));
  // Type order: S, H, CNOT, T.
  for (int i = 0; i < n_gates; ++i) {
    int type = type_dist(rng);
    while (type == 2 && n_qubits == 1) type = type_dist(rng);
    const int q = qubit_dist(rng);
    switch (type) {
      case 0: c.add(S(q)); break;
      case 1: c.add(H(q)); break;
      case 2: {
        std::uniform_int_distribution<int> other(0, n_qubits - 2);
        int t = other(rng);
        if (t >= q) ++t;
        c.add(CNOT(q, t));
        break;
      }
      default: c.add(T(q)); break;
    }
  }
  return c;
}

// -- text format ---------------------------------------------------------------

/// `qubits N` then one gate per line: `h q`, `rz q k`, `cnot c t`, `cz a b`.
inline std::string emit_circuit(const Circuit& c) {
  std::ostringstream os;
  os << "qubits " << c.n_qubits << "\n";
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::H: os << "h " << g.q0; break;
      case GateKind::Rz: os << "rz " << g.q0 << " " << g.phase.k(); break;
      case GateKind::CNOT: os << "cnot " << g.q0 << " " << g.q1; break;
      case GateKind::CZ: os << "cz " << g.q0 << " " << g.q1; break;
    }
    os << "\n";
  }
  return os.str();
}

inline Circuit parse_circuit(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  Circuit c;
  bool have_header = false;
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError("line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op)) continue;
    std::vector<long> args;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        args.push_back(std::stol(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw fail("bad integer '" + tok + "'");
      }
    }
    if (!have_header) {
      if (op != "qubits" || args.size() != 1 || args[0] < 1) {
        throw fail("expected header 'qubits N'");
      }
      c.n_qubits = static_cast<int>(args[0]);
      have_header = true;
      continue;
    }
    auto qubit = [&](long q) {
      if (q < 0 || q >= c.n_qubits) {
        throw fail("qubit " + std::to_string(q) + " out of range");
      }
      return static_cast<int>(q);
    };
    auto want = [&](std::size_t n) {
      if (args.size() != n) {
        throw fail("'" + op + "' takes " + std::to_string(n) + " arguments");
      }
    };
    if (op == "h") {
      want(1);
      c.add(H(qubit(args[0])));
    } else if (op == "rz") {
      want(2);
      c.add(Rz(qubit(args[0]), Phase(static_cast<int>(args[1] % 8))));
    } else if (op == "s" || op == "sdg" || op == "z" || op == "t" || op == "tdg") {
      want(1);
      const int k = op == "s" ? 2 : op == "sdg" ? 6 : op == "z" ? 4 : op == "t" ? 1 : 7;
      c.add(Rz(qubit(args[0]), Phase(k)));
    } else if (op == "cnot" || op == "cx" || op == "cz") {
      want(2);
      const int a = qubit(args[0]);
      const int b = qubit(args[1]);
      if (a == b) throw fail("two-qubit gate on a single qubit");
      c.add(op == "cz" ? CZ(a, b) : CNOT(a, b));
    } else {
      throw fail("unknown mnemonic '" + op + "'");
    }
  }
  if (!have_header) throw ParseError("line " + std::to_string(lineno) + ": missing 'qubits N' header");
  return c;
}

}  // namespace zxrl
