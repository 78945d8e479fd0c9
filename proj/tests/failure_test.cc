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

#include "mcscal/failure.h"

#include <algorithm>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "mcscal/error.h"
#include "testing/oracles.h"
#include "testing/synthetic.h"

namespace mcscal {
namespace {

TEST(RankByUncertaintyTest, Examples) {
  EXPECT_EQ(RankByUncertainty(std::vector<double>{0.1, 0.9, 0.5}),
            (std::vector<std::size_t>{1, 2, 0}));
  EXPECT_EQ(RankByUncertainty(std::vector<double>{0.3, 0.3, 0.3}),
            (std::vector<std::size_t>{0, 1, 2}));
  ProbabilitySet probs({0.0, 1.0, 0.5, 0.5, 0.7, 0.3}, {0, 0, 0}, 2);
  EXPECT_EQ(RankByUncertainty(probs).back(), 0u);
}

TEST(RemovalCountTest, CeilWithRoundingSlack) {
  EXPECT_EQ(RemovalCount(0.0, 10), 0u);
  EXPECT_EQ(RemovalCount(0.25, 4), 1u);
  EXPECT_EQ(RemovalCount(0.26, 4), 2u);
  EXPECT_EQ(RemovalCount(1.0, 7), 7u);
  // 0.3 * 10 is 3.0000000000000004 in binary.
  EXPECT_EQ(RemovalCount(0.3, 10), 3u);
  EXPECT_EQ(RemovalCount(0.05, 100), 5u);
}

TEST(RiskCoverageTest, HandExample) {
  const std::vector<double> h{0.2, 0.9, 0.4, 0.1};
  const std::vector<std::uint8_t> correct{1, 0, 1, 1};
  RiskCoverageCurve curve = RiskCoverage(h, correct, std::vector<double>{0.0, 0.25, 1.0});
  ASSERT_EQ(curve.points.size(), 3u);
  EXPECT_EQ(curve.points[0].accuracy, 0.75);
  EXPECT_EQ(curve.points[0].remaining_count, 4u);
  EXPECT_EQ(curve.points[1].accuracy, 1.0);
  EXPECT_EQ(curve.points[1].remaining_count, 3u);
  EXPECT_FALSE(curve.points[1].degenerate);
  EXPECT_EQ(curve.points[2].remaining_count, 0u);
  EXPECT_EQ(curve.points[2].accuracy, 1.0);
  EXPECT_TRUE(curve.points[2].degenerate);
}

TEST(RiskCoverageTest, OracleSeparation) {
  // Wrong rows have strictly higher entropy than every correct row.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> low(0.0, 0.5), high(0.6, 1.0);
  std::vector<double> h;
  std::vector<std::uint8_t> correct;
  for (int i = 0; i < 40; ++i) {
    const bool ok = i % 5 != 0;
    correct.push_back(ok);
    h.push_back(ok ? low(rng) : high(rng));
  }
  RiskCoverageCurve curve = RiskCoverage(h, correct, std::vector<double>{0.0, 0.2});
  EXPECT_EQ(curve.points[0].accuracy, 0.8);
  EXPECT_EQ(curve.points[1].accuracy, 1.0);

  // Non-decreasing under oracle ranking.
  RiskCoverageCurve full = RiskCoverage(h, correct, DefaultProportions());
  for (std::size_t i = 1; i < full.points.size(); ++i) {
    EXPECT_GE(full.points[i].accuracy, full.points[i - 1].accuracy);
  }
}

TEST(RiskCoverageTest, MatchesBruteForce) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> pick(0, 4);
  std::bernoulli_distribution coin(0.6);
  const std::vector<double> grid = ProportionGrid(0.0, 1.0, 0.05);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 12;
    std::vector<double> h;
    std::vector<std::uint8_t> correct;
    for (std::size_t i = 0; i < n; ++i) {
      h.push_back(pick(rng) * 0.25);  // coarse values so ties occur
      correct.push_back(coin(rng));
    }
    RiskCoverageCurve curve = RiskCoverage(h, correct, grid);
    for (const RiskCoveragePoint& p : curve.points) {
      const double expected = testing::BruteForceRemainingAccuracy(h, correct, p.proportion);
      if (expected < 0) {
        EXPECT_TRUE(p.degenerate);
        EXPECT_EQ(p.accuracy, 1.0);
      } else {
        EXPECT_EQ(p.accuracy, expected);
      }
    }
  }
}

TEST(RiskCoverageTest, PermutationInvariantWithoutTies) {
  std::mt19937_64 rng(13);
  ProbabilitySet probs = Softmax(testing::RandomLogits(rng, 60, 4));
  std::vector<double> h = Entropy(probs);
  Top1Result top = Top1(probs);
  RiskCoverageCurve a = RiskCoverage(h, top.correct, DefaultProportions());
  std::vector<std::size_t> perm(h.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> h2;
  std::vector<std::uint8_t> c2;
  for (std::size_t i : perm) {
    h2.push_back(h[i]);
    c2.push_back(top.correct[i]);
  }
  EXPECT_EQ(a, RiskCoverage(h2, c2, DefaultProportions()));
}

TEST(RiskCoverageTest, ZeroProportionIsFullAccuracy) {
  ProbabilitySet probs = Softmax(testing::HeterogeneousFixture(1, 700));
  RiskCoverageCurve curve = RiskCoverage(probs, DefaultProportions());
  EXPECT_EQ(curve.points[0].accuracy, ScoredSet::FromProbabilities(probs).Accuracy());
}

TEST(RiskCoverageTest, RejectsBadProportions) {
  const std::vector<double> h{0.1};
  const std::vector<std::uint8_t> c{1};
  EXPECT_THROW(RiskCoverage(h, c, std::vector<double>{0.5, 0.2}), ValidationError);
  EXPECT_THROW(RiskCoverage(h, c, std::vector<double>{1.5}), ValidationError);
  EXPECT_THROW(RiskCoverage(h, std::vector<std::uint8_t>{1, 0}, std::vector<double>{0.0}),
               ValidationError);
}

TEST(ProportionGridTest, Default) {
  std::vector<double> grid = DefaultProportions();
  ASSERT_EQ(grid.size(), 11u);
  EXPECT_EQ(grid[0], 0.0);
  EXPECT_EQ(grid[3], 0.15);
  EXPECT_EQ(grid[10], 0.5);
  EXPECT_EQ(ParseProportionGrid("0:0.5:0.05"), grid);
  EXPECT_EQ(ParseProportionGrid("0.1:0.3:0.1"), (std::vector<double>{0.1, 0.2, 0.3}));
  EXPECT_THROW(ParseProportionGrid("0:0.5"), ValidationError);
  EXPECT_THROW(ParseProportionGrid("0:x:0.1"), ValidationError);
  EXPECT_THROW(ParseProportionGrid("0:2:0.1"), ValidationError);
}

}  // namespace
}  // namespace mcscal
