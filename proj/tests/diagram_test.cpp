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

#include "zxrl/diagram.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "zxrl/convert.hpp"
#include "zxrl/diagram_io.hpp"
#include "zxrl/extract.hpp"
#include "zxrl/peephole.hpp"
#include "zxrl/verify.hpp"

namespace zxrl {
namespace {

TEST(DiagramTest, NewDiagramShape) {
  const ZxDiagram d1 = new_diagram(1);
  EXPECT_EQ(d1.num_vertices(), 4u);
  EXPECT_EQ(d1.num_spiders(), 2u);
  EXPECT_EQ(d1.num_edges(), 3u);
  EXPECT_TRUE(is_graph_like(d1));
  const ZxDiagram d3 = new_diagram(3);
  EXPECT_EQ(d3.num_vertices() - d3.num_spiders(), 6u);
  EXPECT_EQ(d3.num_spiders(), 6u);
  EXPECT_EQ(d3.num_interior_spiders(), 0u);
}

TEST(DiagramTest, NewDiagramExtractsToNothing) {
  EXPECT_TRUE(peephole_optimize(extract(new_diagram(2))).gates.empty());
}

TEST(DiagramTest, EdgeRules) {
  ZxDiagram d;
  const VertexId a = d.add_vertex(VertexKind::ZSpider);
  const VertexId b = d.add_vertex(VertexKind::ZSpider);
  EXPECT_THROW(d.add_edge(a, a, EdgeType::Simple), Error);
  d.add_edge(a, b, EdgeType::Hadamard);
  EXPECT_THROW(d.add_edge(b, a, EdgeType::Simple), Error);
  const ZxDiagram before = d;
  d.set_edge_type(a, b, toggled(*d.edge(a, b)));
  d.set_edge_type(a, b, toggled(*d.edge(a, b)));
  EXPECT_EQ(d, before);
  d.toggle_hadamard(a, b);
  EXPECT_FALSE(d.connected(a, b));
  // Ids are never reused.
  d.remove_vertex(b);
  EXPECT_GT(d.add_vertex(VertexKind::ZSpider), b);
}

TEST(GraphLikeTest, HadamardCircuit) {
  const ZxDiagram d = testing::graph_like_of(Circuit{1, {H(0)}});
  EXPECT_TRUE(is_graph_like(d));
  EXPECT_EQ(d.num_spiders(), 2u);
  const auto spiders = d.spiders();
  EXPECT_EQ(d.edge(spiders[0], spiders[1]), EdgeType::Hadamard);
}

TEST(GraphLikeTest, TwoSGatesFuse) {
  const ZxDiagram d = testing::graph_like_of(Circuit{1, {S(0), S(0)}});
  EXPECT_TRUE(is_graph_like(d));
  int pi_spiders = 0;
  for (VertexId v : d.spiders()) pi_spiders += d.phase(v) == Phase::pi();
  EXPECT_EQ(pi_spiders, 1);
}

TEST(GraphLikeTest, CnotDiagramStructure) {
  const ZxDiagram d = circuit_to_diagram(Circuit{2, {CNOT(0, 1)}});
  int z = 0, x = 0;
  for (VertexId v : d.spiders()) {
    z += d.kind(v) == VertexKind::ZSpider;
    x += d.kind(v) == VertexKind::XSpider;
  }
  EXPECT_EQ(z, 1);
  EXPECT_EQ(x, 1);
}

TEST(GraphLikeTest, RandomCliffordCircuitsKeepSemantics) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Circuit c = random_circuit(4, 20, GateSet::Clifford, s);
    const ZxDiagram d = testing::graph_like_of(c);
    std::string why;
    ASSERT_TRUE(is_graph_like(d, &why)) << why;
    ASSERT_TRUE(equivalent_clifford(extract(d), c)) << emit_circuit(c);
  }
}

TEST(GraphLikeTest, RandomCliffordTCircuitsKeepSemantics) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Circuit c = random_circuit(3, 20, GateSet::CliffordT, s);
    ASSERT_TRUE(equivalent_dense(extract(testing::graph_like_of(c)), c));
  }
}

TEST(SerializeTest, RoundTrip) {
  const ZxDiagram d = new_diagram(2);
  EXPECT_EQ(deserialize(serialize(d)), d);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const ZxDiagram g = testing::random_rewrites(
        testing::graph_like_of(random_circuit(4, 25, GateSet::Clifford, s)), 5, s);
    const ZxDiagram back = deserialize(serialize(g));
    EXPECT_EQ(back, g);
    EXPECT_EQ(back.next_id(), g.next_id());
    EXPECT_TRUE(is_graph_like(back));
  }
}

TEST(SerializeTest, Malformed) {
  EXPECT_THROW((void)deserialize("{}"), ParseError);
  EXPECT_THROW((void)deserialize("not json"), ParseError);
  try {
    (void)deserialize(R"({"vertices":[{"kind":"z","phase_k":0}],"edges":[],"inputs":[],"outputs":[]})");
    FAIL() << "expected parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("vertices[0]"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("id"), std::string::npos);
  }
}

}  // namespace
}  // namespace zxrl
