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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "gradcheck.hpp"
#include "zxrl/nn.hpp"

namespace zxrl::nn {
namespace {

Mat random_mat(Index r, Index c, std::mt19937_64& rng, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  Mat m(r, c);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

// Scalar probe: sum(out .* R) for a fixed random R.
Tensor probe(const Tensor& out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sum(mul(out, Tensor::constant(random_mat(out.rows(), out.cols(), rng))));
}

struct OpCase {
  const char* name;
  std::function<Tensor(const Tensor&, const Tensor&)> fn;
  Index ar, ac, br, bc;
};

class OpGradTest : public ::testing::TestWithParam<OpCase> {};

TEST_P(OpGradTest, MatchesCentralDifferences) {
  const OpCase& oc = GetParam();
  std::mt19937_64 rng(17);
  // Entries kept away from 0 and +-0.5 so kinks in leaky_relu, clamp and
  // maximum are not straddled by the finite difference.
  auto away = [&](Index r, Index c) {
    Mat m = random_mat(r, c, rng, 0.1, 0.9);
    std::bernoulli_distribution flip(0.5);
    for (Index i = 0; i < m.size(); ++i) {
      if (std::abs(m.data()[i] - 0.5) < 0.05) m.data()[i] += 0.1;
      if (flip(rng)) m.data()[i] = -m.data()[i];
    }
    return m;
  };
  Tensor a = Tensor::parameter(away(oc.ar, oc.ac));
  Tensor b = Tensor::parameter(away(oc.br, oc.bc));
  const auto errs = testing::gradcheck({{"a", a}, {"b", b}}, [&] { return probe(oc.fn(a, b), 5); });
  for (const auto& e : errs) EXPECT_LT(e.rel_err, 1e-6) << oc.name << " d/d" << e.name;
}

const std::vector<Index> kSeg = {0, 2, 1, 0, 2};

INSTANTIATE_TEST_SUITE_P(
    Ops, OpGradTest,
    ::testing::Values(
        OpCase{"matmul", [](const Tensor& a, const Tensor& b) { return matmul(a, b); }, 3, 4, 4, 2},
        OpCase{"add", [](const Tensor& a, const Tensor& b) { return add(a, b); }, 3, 4, 3, 4},
        OpCase{"sub", [](const Tensor& a, const Tensor& b) { return sub(a, b); }, 3, 4, 3, 4},
        OpCase{"mul", [](const Tensor& a, const Tensor& b) { return mul(a, b); }, 3, 4, 3, 4},
        OpCase{"add_row", [](const Tensor& a, const Tensor& b) { return add_row(a, b); }, 3, 4, 1, 4},
        OpCase{"scale", [](const Tensor& a, const Tensor& b) { return add(scale(a, -2.5), b); }, 2, 2, 2, 2},
        OpCase{"add_scalar", [](const Tensor& a, const Tensor& b) { return mul(add_scalar(a, 0.7), b); }, 2, 3, 2, 3},
        OpCase{"leaky_relu", [](const Tensor& a, const Tensor& b) { return mul(leaky_relu(a, 0.2), b); }, 4, 3, 4, 3},
        OpCase{"exp", [](const Tensor& a, const Tensor& b) { return mul(exp(a), b); }, 3, 3, 3, 3},
        OpCase{"clamp", [](const Tensor& a, const Tensor& b) { return mul(clamp(a, -0.5, 0.5), b); }, 4, 4, 4, 4},
        OpCase{"maximum", [](const Tensor& a, const Tensor& b) { return maximum(a, b); }, 4, 3, 4, 3},
        OpCase{"sum", [](const Tensor& a, const Tensor& b) { return mul(sum(a), sum(b)); }, 3, 2, 2, 2},
        OpCase{"mean", [](const Tensor& a, const Tensor& b) { return mul(mean(a), sum(b)); }, 3, 2, 2, 2},
        OpCase{"gather_rows", [](const Tensor& a, const Tensor& b) { return add(gather_rows(a, {2, 0, 2}), b); }, 3, 2, 3, 2},
        OpCase{"vstack", [](const Tensor& a, const Tensor& b) { return vstack(a, b); }, 2, 3, 4, 3},
        OpCase{"segment_softmax",
               [](const Tensor& a, const Tensor& b) { return mul(segment_softmax(a, kSeg, 3), b); }, 5, 1, 5, 1},
        OpCase{"segment_weighted_sum",
               [](const Tensor& a, const Tensor& b) { return segment_weighted_sum(a, b, kSeg, 3); }, 5, 1, 5, 4},
        OpCase{"segment_log_softmax",
               [](const Tensor& a, const Tensor& b) { return mul(segment_log_softmax(a, kSeg, 3), b); }, 5, 1, 5, 1},
        OpCase{"log_softmax", [](const Tensor& a, const Tensor& b) { return mul(log_softmax(a), b); }, 6, 1, 6, 1}),
    [](const ::testing::TestParamInfo<OpCase>& info) { return std::string(info.param.name); });

TEST(TensorTest, GradientsAccumulateAcrossBackwardCalls) {
  Tensor a = Tensor::parameter(Mat::Constant(2, 2, 3.0));
  sum(a).backward();
  sum(scale(a, 2.0)).backward();
  EXPECT_TRUE(a.grad().isApprox(Mat::Constant(2, 2, 3.0)));
  a.zero_grad();
  EXPECT_TRUE(a.grad().isZero());
}

TEST(TensorTest, SharedSubexpressionGetsBothContributions) {
  Tensor a = Tensor::parameter(Mat::Constant(1, 1, 2.0));
  const Tensor sq = mul(a, a);  // d/da a^2 = 2a
  add(sq, a).backward();
  EXPECT_DOUBLE_EQ(a.grad()(0, 0), 5.0);
}

TEST(TensorTest, NoGradGuardRecordsNothing) {
  Tensor a = Tensor::parameter(Mat::Ones(2, 2));
  NoGradGuard guard;
  const Tensor b = scale(a, 3.0);
  EXPECT_FALSE(b.requires_grad());
}

TEST(TensorTest, ShapeErrors) {
  const Tensor a = Tensor::constant(Mat::Ones(2, 3));
  const Tensor b = Tensor::constant(Mat::Ones(2, 2));
  EXPECT_THROW(matmul(a, b), ShapeMismatch);
  EXPECT_THROW(add(a, b), ShapeMismatch);
  EXPECT_THROW((void)a.item(), ShapeMismatch);
  EXPECT_THROW(a.backward(), ShapeMismatch);
}

TEST(TensorTest, SegmentLogSoftmaxNormalizesEachGroup) {
  std::mt19937_64 rng(3);
  const Tensor x = Tensor::constant(random_mat(5, 1, rng, -3, 3));
  const Mat lp = segment_log_softmax(x, kSeg, 3).value();
  std::vector<double> mass(3, 0.0);
  for (std::size_t k = 0; k < kSeg.size(); ++k) mass[kSeg[k]] += std::exp(lp(static_cast<Index>(k), 0));
  for (double m : mass) EXPECT_NEAR(m, 1.0, 1e-12);
}

}  // namespace
}  // namespace zxrl::nn
