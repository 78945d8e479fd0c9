// Copyright 2026 The mcscal Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mcscal/kernels.h"

#include <omp.h>

#include <cstring>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "mcscal/calibrate.h"
#include "testing/oracles.h"
#include "testing/synthetic.h"

namespace mcscal {
namespace {

class KernelsTest : public ::testing::Test {
 protected:
  void SetUp() override { omp_set_num_threads(4); }
};

bool BitwiseEqual(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

TEST_F(KernelsTest, SoftmaxSerialParallelIdentical) {
  std::mt19937_64 rng(1);
  // Large enough to cross the parallel threshold.
  PredictionSet pred = testing::RandomLogits(rng, 20000, 10);
  std::vector<double> temps{0.5, 1, 2, 3, 0.7, 1.1, 1.3, 0.9, 4, 0.2};
  for (std::size_t nt : {0u, 1u, 10u}) {
    std::span<const double> t(temps.data(), nt);
    std::vector<double> a(pred.logits().size()), b(a.size());
    kernels::serial::ScaledSoftmax(pred.logits(), 10, t, a);
    kernels::parallel::ScaledSoftmax(pred.logits(), 10, t, b);
    EXPECT_TRUE(BitwiseEqual(a, b)) << nt;
  }
}

TEST_F(KernelsTest, SoftmaxMatchesLongDoubleOracle) {
  std::mt19937_64 rng(2);
  PredictionSet pred = testing::RandomLogits(rng, 200, 5, 4.0);
  std::vector<double> temps{0.5, 1, 2, 3, 0.7};
  std::vector<double> out(pred.logits().size());
  kernels::serial::ScaledSoftmax(pred.logits(), 5, temps, out);
  std::vector<double> ref = testing::NaiveSoftmax(pred.logits(), 5, temps);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out[i], ref[i], 1e-14);
}

TEST_F(KernelsTest, Top1EntropyNegLogSerialParallelIdentical) {
  std::mt19937_64 rng(3);
  const std::size_t n = 30000;
  const int k = 4;
  PredictionSet pred = testing::RandomLogits(rng, n, k);
  std::vector<double> probs(n * k);
  kernels::serial::ScaledSoftmax(pred.logits(), k, {}, probs);

  std::vector<double> c1(n), c2(n);
  std::vector<int> p1(n), p2(n);
  std::vector<std::uint8_t> r1(n), r2(n);
  kernels::serial::Top1(probs, k, pred.labels(), c1, p1, r1);
  kernels::parallel::Top1(probs, k, pred.labels(), c2, p2, r2);
  EXPECT_TRUE(BitwiseEqual(c1, c2));
  EXPECT_EQ(p1, p2);
  EXPECT_EQ(r1, r2);

  std::vector<double> h1(n), h2(n);
  kernels::serial::Entropy(probs, k, h1);
  kernels::parallel::Entropy(probs, k, h2);
  EXPECT_TRUE(BitwiseEqual(h1, h2));

  std::vector<double> l1(n), l2(n);
  kernels::serial::TrueClassNegLog(probs, k, pred.labels(), 1e-12, l1);
  kernels::parallel::TrueClassNegLog(probs, k, pred.labels(), 1e-12, l2);
  EXPECT_TRUE(BitwiseEqual(l1, l2));
}

TEST_F(KernelsTest, Top1TieBreaksLowestIndex) {
  std::vector<double> probs{0.4, 0.4, 0.2, 0.25, 0.25, 0.25, 0.25, 0, 0, 0};
  std::vector<int> labels{1, 3};
  std::vector<double> conf(2);
  std::vector<int> pred(2);
  std::vector<std::uint8_t> correct(2);
  kernels::serial::Top1(std::span(probs).first(8), 4, labels, conf, pred, correct);
  EXPECT_EQ(pred[0], 0);
  EXPECT_EQ(pred[1], 0);
  EXPECT_EQ(correct[0], 0);
}

TEST_F(KernelsTest, GammaGridSerialParallelIdentical) {
  PredictionSet val = testing::HeterogeneousFixture(4, 600);
  FitConfig cfg;
  cfg.gamma_step = 0.01;
  cfg.gamma_lo = -0.99;
  cfg.gamma_hi = 0.99;
  const double t = 1.3;
  std::vector<double> cwmcs = FittingCwmcs(val, t, cfg);
  std::vector<double> grid = GammaGrid(cfg);
  std::vector<double> a = EvaluateGammaGrid(val, t, cwmcs, grid, cfg, Execution::kSerial);
  std::vector<double> b = EvaluateGammaGrid(val, t, cwmcs, grid, cfg, Execution::kParallel);
  EXPECT_TRUE(BitwiseEqual(a, b));
}

TEST(SumAscendingTest, FixedOrder) {
  std::vector<double> v{1e16, 1.0, -1e16, 1.0};
  double expected = 0.0;
  for (double x : v) expected += x;
  EXPECT_EQ(kernels::SumAscending(v), expected);
}

}  // namespace
}  // namespace mcscal
