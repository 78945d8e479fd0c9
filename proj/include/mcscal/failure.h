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

#ifndef MCSCAL_FAILURE_H_
#define MCSCAL_FAILURE_H_

// Entropy-ranked failure detection: refer the most uncertain predictions to
// an expert and track the accuracy of what is left.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mcscal/dataset.h"

namespace mcscal {

struct RiskCoveragePoint {
  double proportion = 0.0;
  // Accuracy of the retained samples; 1.0 when nothing is retained.
  double accuracy = 0.0;
  std::size_t remaining_count = 0;
  // Set when remaining_count == 0.
  bool degenerate = false;

  friend bool operator==(const RiskCoveragePoint&, const RiskCoveragePoint&) = default;
};

struct RiskCoverageCurve {
  std::vector<RiskCoveragePoint> points;

  std::vector<double> Grid() const;
  friend bool operator==(const RiskCoverageCurve&, const RiskCoverageCurve&) = default;
};

// Row indices ordered most uncertain first (entropy descending); equal
// entropies keep ascending index order.
std::vector<std::size_t> RankByUncertainty(std::span<const double> entropy);
std::vector<std::size_t> RankByUncertainty(const ProbabilitySet& probs);

// Number of samples removed at proportion p: ceil(p * n - 1e-9 * max(1, p * n)).
// 0.15 * 100 removes 15.
std::size_t RemovalCount(double proportion, std::size_t n);

// `proportions` must be strictly increasing within [0, 1].
RiskCoverageCurve RiskCoverage(std::span<const double> entropy,
                               std::span<const std::uint8_t> correct,
                               std::span<const double> proportions);
RiskCoverageCurve RiskCoverage(const ProbabilitySet& probs, std::span<const double> proportions);

// start, start + step, ... up to stop inclusive. Values are rounded to 12
// decimals so 0.15 prints as 0.15.
std::vector<double> ProportionGrid(double start, double stop, double step);
// Parses "start:stop:step".
std::vector<double> ParseProportionGrid(std::string_view spec);
// 0 to 0.5 in steps of 0.05.
std::vector<double> DefaultProportions();

}  // namespace mcscal

#endif  // MCSCAL_FAILURE_H_
