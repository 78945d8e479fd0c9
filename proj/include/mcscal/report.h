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

#ifndef MCSCAL_REPORT_H_
#define MCSCAL_REPORT_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcscal/calibrate.h"
#include "mcscal/dataset.h"
#include "mcscal/failure.h"
#include "mcscal/metrics.h"

namespace mcscal {

// One reliability-diagram bar. The means are absent for empty bins.
struct ReliabilityRow {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  std::optional<double> confidence;
  std::optional<double> accuracy;
  // confidence - accuracy
  std::optional<double> gap;

  friend bool operator==(const ReliabilityRow&, const ReliabilityRow&) = default;
};

struct ReliabilityData {
  std::vector<ReliabilityRow> rows;
  std::size_t num_samples = 0;
  double accuracy = 0.0;
  double mean_confidence = 0.0;

  friend bool operator==(const ReliabilityData&, const ReliabilityData&) = default;
};

ReliabilityData Reliability(const ScoredSet& scored, const BinningConfig& cfg);
ReliabilityData Reliability(const ProbabilitySet& probs, const BinningConfig& cfg);

// Metrics for one calibration method on the shared test set.
struct MethodEntry {
  std::string name;
  CalibrationReport calibration;
  ReliabilityData reliability;
  RiskCoverageCurve risk_coverage;
  std::optional<TemperatureModel> model;  // absent for the baseline
  // Test rows whose argmax differs from the uncalibrated argmax. Always 0
  // for scalar temperatures; a per-class vector can move the argmax.
  std::size_t argmax_changed = 0;
};

struct ComparisonReport {
  FitConfig fit_config;
  std::vector<double> proportions;
  std::size_t val_samples = 0;
  std::size_t test_samples = 0;
  int num_classes = 0;
  std::vector<MethodEntry> methods;  // baseline, ts, cwmcs_ts

  // Throws std::out_of_range for unknown names.
  const MethodEntry& method(std::string_view name) const;
};

MethodEntry EvaluateMethod(std::string name, const PredictionSet& test,
                           std::optional<TemperatureModel> model, const BinningConfig& bins,
                           std::span<const double> proportions);

// Fits scalar TS and cwMCS TS on `val` and evaluates baseline, ts and
// cwmcs_ts on `test`. Throws ValidationError when K differs.
ComparisonReport Compare(const PredictionSet& val, const PredictionSet& test,
                         const FitConfig& cfg, std::span<const double> proportions);
ComparisonReport Compare(const PredictionSet& val, const PredictionSet& test,
                         const FitConfig& cfg);

}  // namespace mcscal

#endif  // MCSCAL_REPORT_H_
