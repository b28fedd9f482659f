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

#include "zxrl/simplify.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "zxrl/extract.hpp"
#include "zxrl/verify.hpp"

namespace zxrl {
namespace {

using testing::graph_like_of;

TEST(ReduceAllTest, IdentityUnchanged) {
  EXPECT_EQ(reduce_all(new_diagram(3)), new_diagram(3));
}

TEST(ReduceAllTest, CliffordLeavesNoInteriorSpiders) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Circuit c = random_circuit(5, 60, GateSet::Clifford, s);
    const ZxDiagram d = reduce_all(graph_like_of(c));
    EXPECT_EQ(d.num_interior_spiders(), 0u) << "seed " << s;
    std::string why;
    ASSERT_TRUE(is_graph_like(d, &why)) << why;
    ASSERT_TRUE(equivalent_clifford(extract(d), c)) << "seed " << s;
  }
}

TEST(ReduceAllTest, NoActionsLeftButStopAndBoundaryFree) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ZxDiagram d = reduce_all(graph_like_of(random_circuit(4, 40, GateSet::Clifford, s)));
    for (const auto& a : enumerate_actions(d)) {
      EXPECT_TRUE(a.tag == RuleTag::Stop) << rule_name(a.tag);
    }
  }
}

TEST(ReduceAllTest, CliffordTWithAndWithoutGadgets) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const int n = 2 + static_cast<int>(s % 3);
    const Circuit c = random_circuit(n, 30, GateSet::CliffordT, s);
    const ZxDiagram g = graph_like_of(c);
    const ZxDiagram plain = reduce_all(g, false);
    const ZxDiagram gad = reduce_all(g, true);
    ASSERT_TRUE(is_graph_like(plain));
    ASSERT_TRUE(is_graph_like(gad));
    ASSERT_TRUE(equivalent_dense(extract(plain), c)) << "seed " << s;
    ASSERT_TRUE(equivalent_dense(extract(gad), c)) << "seed " << s;
  }
}

TEST(ReduceAllTest, ShuffledOrderKeepsSemantics) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Circuit c = random_circuit(5, 50, GateSet::Clifford, s);
    ReduceOptions opt;
    opt.shuffle_seed = s;
    const ZxDiagram d = reduce_all(graph_like_of(c), opt);
    EXPECT_EQ(d.num_interior_spiders(), 0u);
    ASSERT_TRUE(equivalent_clifford(extract(d), c));
    EXPECT_EQ(d, reduce_all(graph_like_of(c), opt));
  }
}

TEST(ReduceAllTest, TraceReplaysToSameDiagram) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const ZxDiagram g = graph_like_of(random_circuit(4, 40, GateSet::Clifford, s));
    std::vector<RewriteAction> trace;
    ReduceOptions opt;
    opt.trace = &trace;
    const ZxDiagram reduced = reduce_all(g, opt);
    ZxDiagram replay = g;
    for (const auto& a : trace) {
      const auto acts = enumerate_actions(replay);
      ASSERT_NE(std::find(acts.begin(), acts.end(), a), acts.end()) << rule_name(a.tag);
      apply_in_place(replay, a);
    }
    drop_scalar_components(replay);
    EXPECT_EQ(replay, reduced);
  }
}

TEST(ReduceAllTest, CompressesLongCliffordCircuits) {
  double total = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    const Circuit c = random_circuit(10, 400, GateSet::Clifford, static_cast<std::uint64_t>(s));
    total += count_gates(extract(reduce_all(graph_like_of(c)))).total;
  }
  EXPECT_LT(total / seeds, 400.0);
}

}  // namespace
}  // namespace zxrl
