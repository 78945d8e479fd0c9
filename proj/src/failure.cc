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
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

#include "mcscal/error.h"

namespace mcscal {
namespace {

void CheckProportions(std::span<const double> proportions) {
  for (std::size_t i = 0; i < proportions.size(); ++i) {
    const double p = proportions[i];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError("proportion " + std::to_string(p) + " outside [0, 1]");
    }
    if (i > 0 && !(p > proportions[i - 1])) {
      throw ValidationError("proportions must be strictly increasing");
    }
  }
}

double ParseNumber(std::string_view text, std::string_view spec) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError("bad proportion grid '" + std::string(spec) +
                          "', expected start:stop:step");
  }
  return value;
}

}  // namespace

std::vector<double> RiskCoverageCurve::Grid() const {
  std::vector<double> grid;
  grid.reserve(points.size());
  for (const RiskCoveragePoint& p : points) grid.push_back(p.proportion);
  return grid;
}

std::vector<std::size_t> RankByUncertainty(std::span<const double> entropy) {
  std::vector<std::size_t> order(entropy.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return entropy[a] > entropy[b]; });
  return order;
}

std::vector<std::size_t> RankByUncertainty(const ProbabilitySet& probs) {
  return RankByUncertainty(Entropy(probs));
}

std::size_t RemovalCount(double proportion, std::size_t n) {
  const double exact = proportion * static_cast<double>(n);
  const double removed = std::ceil(exact - 1e-9 * std::max(1.0, exact));
  return std::min(n, static_cast<std::size_t>(std::max(0.0, removed)));
}

RiskCoverageCurve RiskCoverage(std::span<const double> entropy,
                               std::span<const std::uint8_t> correct,
                               std::span<const double> proportions) {
  if (entropy.size() != correct.size()) {
    throw ValidationError("entropy and correctness differ in length");
  }
  CheckProportions(proportions);
  const std::size_t n = entropy.size();
  const std::vector<std::size_t> order = RankByUncertainty(entropy);
  // removed_hits[r] = correct predictions among the r most uncertain rows.
  std::vector<std::size_t> removed_hits(n + 1, 0);
  for (std::size_t r = 0; r < n; ++r) removed_hits[r + 1] = removed_hits[r] + correct[order[r]];

  RiskCoverageCurve curve;
  for (double p : proportions) {
    const std::size_t removed = RemovalCount(p, n);
    RiskCoveragePoint point;
    point.proportion = p;
    point.remaining_count = n - removed;
    if (point.remaining_count == 0) {
      point.accuracy = 1.0;
      point.degenerate = true;
    } else {
      point.accuracy = static_cast<double>(removed_hits[n] - removed_hits[removed]) /
                       static_cast<double>(point.remaining_count);
    }
    curve.points.push_back(point);
  }
  return curve;
}

RiskCoverageCurve RiskCoverage(const ProbabilitySet& probs, std::span<const double> proportions) {
  const Top1Result top = Top1(probs);
  return RiskCoverage(Entropy(probs), top.correct, proportions);
}

std::vector<double> ProportionGrid(double start, double stop, double step) {
  if (!(step > 0.0) || !(start >= 0.0) || !(stop <= 1.0) || !(start <= stop)) {
    throw ValidationError("proportion grid needs 0 <= start <= stop <= 1 and step > 0");
  }
  std::vector<double> grid;
  for (long long i = 0;; ++i) {
    const double raw = start + static_cast<double>(i) * step;
    if (raw > stop + 1e-9) break;
    grid.push_back(std::min(1.0, std::round(raw * 1e12) / 1e12));
  }
  return grid;
}

std::vector<double> ParseProportionGrid(std::string_view spec) {
  const std::size_t first = spec.find(':');
  const std::size_t second = first == std::string_view::npos ? first : spec.find(':', first + 1);
  if (second == std::string_view::npos || spec.find(':', second + 1) != std::string_view::npos) {
    throw ValidationError("bad proportion grid '" + std::string(spec) +
                          "', expected start:stop:step");
  }
  return ProportionGrid(ParseNumber(spec.substr(0, first), spec),
                        ParseNumber(spec.substr(first + 1, second - first - 1), spec),
                        ParseNumber(spec.substr(second + 1), spec));
}

std::vector<double> DefaultProportions() { return ProportionGrid(0.0, 0.5, 0.05); }

}  // namespace mcscal
