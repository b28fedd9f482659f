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

#include "zxrl/circuit.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "zxrl/peephole.hpp"
#include "zxrl/verify.hpp"

namespace zxrl {
namespace {

TEST(RandomCircuitTest, EmptyAndDeterministic) {
  EXPECT_TRUE(random_circuit(5, 0, GateSet::Clifford, 3).gates.empty());
  const Circuit a = random_circuit(5, 25, GateSet::Clifford, 42);
  const Circuit b = random_circuit(5, 25, GateSet::Clifford, 42);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, random_circuit(5, 25, GateSet::Clifford, 43));
  EXPECT_EQ(count_gates(random_circuit(10, 100, GateSet::Clifford, 5)).total, 100);
}

TEST(RandomCircuitTest, SingleQubitNeverGetsCnot) {
  const Circuit c = random_circuit(1, 200, GateSet::CliffordT, 9);
  EXPECT_EQ(count_gates(c).two_qubit, 0);
  EXPECT_NO_THROW(validate(c));
}

TEST(RandomCircuitTest, CnotShareIsOneThird) {
  // Each gate is a CNOT with p = 1/3; over 1000 seeds of 100 gates the
  // per-circuit mean has standard error sqrt(100 * 2/9) / sqrt(1000).
  double sum = 0;
  const int seeds = 1000;
  for (int s = 0; s < seeds; ++s) {
    const Circuit c = random_circuit(10, 100, GateSet::Clifford, static_cast<std::uint64_t>(s));
    for (const Gate& g : c.gates) {
      ASSERT_TRUE(g.kind != GateKind::CNOT || g.q0 != g.q1);
    }
    sum += count_gates(c).two_qubit;
  }
  const double mean = sum / seeds;
  const double sigma = std::sqrt(100.0 * (1.0 / 3.0) * (2.0 / 3.0) / seeds);
  EXPECT_NEAR(mean, 100.0 / 3.0, 3 * sigma);
}

TEST(CountGatesTest, Counts) {
  EXPECT_EQ(count_gates(Circuit{1, {}}), (GateCount{0, 0, 0, 0}));
  Circuit c{2, {H(0), CNOT(0, 1), T(1)}};
  EXPECT_EQ(count_gates(c), (GateCount{3, 1, 1, 1}));
}

TEST(CircuitTextTest, ParseBasics) {
  const Circuit c = parse_circuit("qubits 1\nh 0");
  EXPECT_EQ(c, (Circuit{1, {H(0)}}));
  const Circuit d = parse_circuit("# comment\nqubits 2\n\ncx 0 1 # trailing\nt 1\ncz 1 0\n");
  EXPECT_EQ(d, (Circuit{2, {CNOT(0, 1), T(1), CZ(1, 0)}}));
}

TEST(CircuitTextTest, Errors) {
  try {
    (void)parse_circuit("qubits 1\ncnot 0 1");
    FAIL() << "expected parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("out of range"), std::string::npos);
  }
  EXPECT_THROW((void)parse_circuit("qubits 2\nfoo 0"), ParseError);
  EXPECT_THROW((void)parse_circuit("h 0"), ParseError);
  EXPECT_THROW((void)parse_circuit("qubits 2\ncz 1 1"), ParseError);
}

TEST(CircuitTextTest, RoundTrip) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Circuit c = random_circuit(1 + static_cast<int>(s % 6), 30, GateSet::CliffordT, s);
    EXPECT_EQ(parse_circuit(emit_circuit(c)), c);
  }
}

TEST(PeepholeTest, Cancellations) {
  EXPECT_TRUE(peephole_optimize(Circuit{1, {H(0), H(0)}}).gates.empty());
  EXPECT_TRUE(peephole_optimize(Circuit{1, {S(0), S(0), S(0), S(0)}}).gates.empty());
  EXPECT_TRUE(peephole_optimize(Circuit{2, {CNOT(0, 1), CNOT(0, 1)}}).gates.empty());
  EXPECT_TRUE(peephole_optimize(Circuit{2, {CZ(0, 1), CZ(1, 0)}}).gates.empty());
  // Rz slides through a CNOT control to meet its partner.
  const Circuit c{2, {T(0), CNOT(0, 1), Tdg(0)}};
  EXPECT_EQ(peephole_optimize(c), (Circuit{2, {CNOT(0, 1)}}));
}

TEST(PeepholeTest, RandomCircuitsStayEquivalent) {
  for (std::uint64_t s = 0; s < 500; ++s) {
    const int n = 1 + static_cast<int>(s % 5);
    const Circuit c = random_circuit(n, 40, GateSet::Clifford, s);
    const Circuit p = peephole_optimize(c);
    ASSERT_LE(count_gates(p).total, count_gates(c).total);
    ASSERT_TRUE(equivalent_clifford(c, p)) << emit_circuit(c);
    ASSERT_EQ(peephole_optimize(p), p);
  }
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Circuit c = random_circuit(3, 30, GateSet::CliffordT, s);
    ASSERT_TRUE(equivalent_dense(c, peephole_optimize(c)));
  }
}

}  // namespace
}  // namespace zxrl
