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

#include "mcscal/dataset.h"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "mcscal/error.h"
#include "testing/synthetic.h"

namespace mcscal {
namespace {

TEST(PredictionSetTest, Accessors) {
  PredictionSet pred({0.0, 1.0, 2.0, 3.0, 4.0, 5.0}, {1, 0}, 3);
  EXPECT_EQ(pred.size(), 2u);
  EXPECT_EQ(pred.num_classes(), 3);
  EXPECT_EQ(pred.row(1)[2], 5.0);
  EXPECT_EQ(pred.label(0), 1);
}

TEST(PredictionSetTest, RejectsBadInput) {
  EXPECT_THROW(PredictionSet({0.0}, {0}, 0), ValidationError);
  EXPECT_THROW(PredictionSet({0.0, 1.0, 2.0}, {0}, 2), ValidationError);
  EXPECT_THROW(PredictionSet({0.0, 1.0}, {2}, 2), ValidationError);
  EXPECT_THROW(PredictionSet({0.0, 1.0}, {-1}, 2), ValidationError);
  EXPECT_THROW(PredictionSet({std::numeric_limits<double>::quiet_NaN(), 1.0}, {0}, 2),
               ValidationError);
  EXPECT_THROW(PredictionSet({std::numeric_limits<double>::infinity(), 1.0}, {0}, 2),
               ValidationError);
}

TEST(ProbabilitySetTest, RejectsNonStochasticRows) {
  EXPECT_THROW(ProbabilitySet({0.5, 0.6}, {0}, 2), ValidationError);
  EXPECT_THROW(ProbabilitySet({1.1, -0.1}, {0}, 2), ValidationError);
  EXPECT_NO_THROW(ProbabilitySet({0.25, 0.75}, {1}, 2));
}

TEST(SoftmaxTest, ClosedForms) {
  PredictionSet pred({0.0, 0.0, std::log(3.0), 0.0, 1000.0, 0.0}, {0, 0, 0}, 2);
  ProbabilitySet probs = Softmax(pred);
  EXPECT_DOUBLE_EQ(probs.row(0)[0], 0.5);
  EXPECT_DOUBLE_EQ(probs.row(0)[1], 0.5);
  EXPECT_NEAR(probs.row(1)[0], 0.75, 1e-15);
  EXPECT_NEAR(probs.row(1)[1], 0.25, 1e-15);
  EXPECT_EQ(probs.row(2)[0], 1.0);
  EXPECT_EQ(probs.row(2)[1], 0.0);
}

TEST(SoftmaxTest, ArgmaxMatchesLogitArgmax) {
  std::mt19937_64 rng(5);
  PredictionSet pred = testing::RandomLogits(rng, 500, 7);
  Top1Result top = Top1(Softmax(pred));
  for (std::size_t i = 0; i < pred.size(); ++i) {
    auto row = pred.row(i);
    int best = 0;
    for (int k = 1; k < 7; ++k) {
      if (row[k] > row[best]) best = k;
    }
    EXPECT_EQ(top.predicted[i], best);
  }
}

TEST(Top1Test, Examples) {
  ProbabilitySet probs({0.2, 0.8, 0.5, 0.5, 0.9, 0.1}, {1, 0, 1}, 2);
  Top1Result top = Top1(probs);
  EXPECT_EQ(top.confidence, (std::vector<double>{0.8, 0.5, 0.9}));
  EXPECT_EQ(top.predicted, (std::vector<int>{1, 0, 0}));
  EXPECT_EQ(top.correct, (std::vector<std::uint8_t>{1, 1, 0}));
}

TEST(BinAssignTest, Boundaries) {
  BinningConfig cfg;
  EXPECT_EQ(BinAssign(0.0, cfg), 1);
  EXPECT_EQ(BinAssign(1.0, cfg), 15);
  EXPECT_EQ(BinAssign(0.73, cfg), 11);
  EXPECT_EQ(BinAssign(0.5, BinningConfig{2}), 1);
  EXPECT_EQ(BinAssign(std::nextafter(0.5, 1.0), BinningConfig{2}), 2);
  EXPECT_THROW(BinAssign(1.5, cfg), ValidationError);
  EXPECT_THROW(BinAssign(-0.1, cfg), ValidationError);
  EXPECT_THROW(BinAssign(0.5, BinningConfig{0}), ValidationError);
}

TEST(BinAssignTest, Monotone) {
  BinningConfig cfg{7};
  int prev = 1;
  for (int i = 0; i <= 10000; ++i) {
    const int bin = BinAssign(i / 10000.0, cfg);
    EXPECT_GE(bin, prev);
    prev = bin;
  }
}

TEST(BinStatsTest, FourSampleFixture) {
  BinStats stats = ComputeBinStats(testing::FourSampleScored(), BinningConfig{2});
  ASSERT_EQ(stats.bins.size(), 2u);
  EXPECT_EQ(stats.bins[0].count, 1u);
  EXPECT_DOUBLE_EQ(stats.bins[0].mean_confidence, 0.4);
  EXPECT_DOUBLE_EQ(stats.bins[0].mean_accuracy, 1.0);
  EXPECT_EQ(stats.bins[1].count, 3u);
  EXPECT_NEAR(stats.bins[1].mean_confidence, 0.76667, 1e-5);
  EXPECT_NEAR(stats.bins[1].mean_accuracy, 0.66667, 1e-5);
  EXPECT_DOUBLE_EQ(stats.bins[1].lo, 0.5);
  EXPECT_DOUBLE_EQ(stats.bins[1].hi, 1.0);
}

TEST(BinStatsTest, SingleSample) {
  ScoredSet scored({0.73}, {1}, {0}, 1);
  BinStats stats = ComputeBinStats(scored, BinningConfig{});
  for (int m = 0; m < 15; ++m) {
    EXPECT_EQ(stats.bins[m].count, m == 10 ? 1u : 0u);
  }
  EXPECT_DOUBLE_EQ(stats.bins[10].mean_confidence, 0.73);
  EXPECT_DOUBLE_EQ(stats.bins[10].mean_accuracy, 1.0);
}

TEST(BinStatsTest, PartitionsRows) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    ScoredSet scored = testing::RandomScored(rng, 50, 3);
    BinStats stats = ComputeBinStats(scored, BinningConfig{1 + trial});
    std::size_t total = 0;
    for (const Bin& b : stats.bins) total += b.count;
    EXPECT_EQ(total, 50u);
  }
}

TEST(ClassSubsetTest, Examples) {
  PredictionSet pred({1, 2, 3, 4, 5, 6}, {0, 1, 0}, 2);
  PredictionSet sub = ClassSubset(pred, 0);
  EXPECT_EQ(sub.size(), 2u);
  EXPECT_EQ(sub.row(0)[0], 1);
  EXPECT_EQ(sub.row(1)[0], 5);
  PredictionSet ones({1, 2, 3, 4}, {1, 1}, 2);
  EXPECT_TRUE(ClassSubset(ones, 0).empty());
  EXPECT_THROW(ClassSubset(pred, 2), ValidationError);
  EXPECT_THROW(ClassSubset(pred, -1), ValidationError);
}

TEST(ClassSubsetTest, Partition) {
  std::vector<std::size_t> sizes = ClassSizes(std::vector<int>{0, 1, 2}, 3);
  EXPECT_EQ(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}), 3u);
  std::mt19937_64 rng(3);
  ScoredSet scored = testing::RandomScored(rng, 100, 4);
  std::size_t total = 0;
  for (int k = 0; k < 4; ++k) total += ClassSubset(scored, k).size();
  EXPECT_EQ(total, 100u);
}

TEST(EntropyTest, Examples) {
  ProbabilitySet probs({0.25, 0.25, 0.25, 0.25, 1.0, 0.0, 0.0, 0.0}, {0, 0}, 4);
  std::vector<double> h = Entropy(probs);
  EXPECT_NEAR(h[0], std::log(4.0), 1e-15);
  EXPECT_EQ(h[1], 0.0);
  ProbabilitySet pair({0.8, 0.2, 0.2, 0.8}, {0, 0}, 2);
  h = Entropy(pair);
  EXPECT_NEAR(h[0], 0.50040, 1e-5);
  EXPECT_EQ(h[0], h[1]);
}

TEST(ScoredSetTest, AccuracyAndConfidence) {
  ScoredSet scored = testing::FourSampleScored();
  EXPECT_DOUBLE_EQ(scored.Accuracy(), 0.75);
  EXPECT_DOUBLE_EQ(scored.MeanConfidence(), 0.675);
  ScoredSet empty({}, {}, {}, 2);
  EXPECT_THROW(empty.Accuracy(), ValidationError);
  EXPECT_THROW(ScoredSet({1.2}, {1}, {0}, 1), ValidationError);
}

}  // namespace
}  // namespace mcscal
