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

#include "mcscal/report.h"

#include <stdexcept>
#include <utility>

#include "mcscal/error.h"

namespace mcscal {

ReliabilityData Reliability(const ScoredSet& scored, const BinningConfig& cfg) {
  const BinStats stats = ComputeBinStats(scored, cfg);
  ReliabilityData data;
  data.num_samples = scored.size();
  if (!scored.empty()) {
    data.accuracy = scored.Accuracy();
    data.mean_confidence = scored.MeanConfidence();
  }
  data.rows.reserve(stats.bins.size());
  for (const Bin& bin : stats.bins) {
    ReliabilityRow row{bin.lo, bin.hi, bin.count, std::nullopt, std::nullopt, std::nullopt};
    if (!bin.empty()) {
      row.confidence = bin.mean_confidence;
      row.accuracy = bin.mean_accuracy;
      row.gap = bin.mean_confidence - bin.mean_accuracy;
    }
    data.rows.push_back(row);
  }
  return data;
}

ReliabilityData Reliability(const ProbabilitySet& probs, const BinningConfig& cfg) {
  return Reliability(ScoredSet::FromProbabilities(probs), cfg);
}

const MethodEntry& ComparisonReport::method(std::string_view name) const {
  for (const MethodEntry& m : methods) {
    if (m.name == name) return m;
  }
  throw std::out_of_range("no method named " + std::string(name));
}

MethodEntry EvaluateMethod(std::string name, const PredictionSet& test,
                           std::optional<TemperatureModel> model, const BinningConfig& bins,
                           std::span<const double> proportions) {
  const ProbabilitySet baseline = Softmax(test);
  const ProbabilitySet probs = model ? model->Apply(test) : baseline;
  const Top1Result top = Top1(probs);
  const ScoredSet scored(top.confidence, top.correct,
                         std::vector<int>(test.labels().begin(), test.labels().end()),
                         test.num_classes());

  MethodEntry entry;
  entry.name = std::move(name);
  entry.calibration = ComputeReport(scored, bins);
  entry.reliability = Reliability(scored, bins);
  entry.risk_coverage = RiskCoverage(Entropy(probs), top.correct, proportions);
  if (model) {
    const Top1Result base_top = Top1(baseline);
    for (std::size_t i = 0; i < test.size(); ++i) {
      if (base_top.predicted[i] != top.predicted[i]) ++entry.argmax_changed;
    }
  }
  entry.model = std::move(model);
  return entry;
}

ComparisonReport Compare(const PredictionSet& val, const PredictionSet& test,
                         const FitConfig& cfg, std::span<const double> proportions) {
  cfg.Validate();
  if (val.num_classes() != test.num_classes()) {
    throw ValidationError("class count mismatch: validation K = " +
                          std::to_string(val.num_classes()) +
                          ", test K = " + std::to_string(test.num_classes()));
  }
  ComparisonReport report;
  report.fit_config = cfg;
  report.proportions.assign(proportions.begin(), proportions.end());
  report.val_samples = val.size();
  report.test_samples = test.size();
  report.num_classes = test.num_classes();

  TemperatureModel ts = FitScalar(val, cfg);
  TemperatureModel cwmcs_ts = FitCwmcs(val, cfg);
  report.methods.push_back(EvaluateMethod("baseline", test, std::nullopt, cfg.bins, proportions));
  report.methods.push_back(EvaluateMethod("ts", test, std::move(ts), cfg.bins, proportions));
  report.methods.push_back(
      EvaluateMethod("cwmcs_ts", test, std::move(cwmcs_ts), cfg.bins, proportions));
  return report;
}

ComparisonReport Compare(const PredictionSet& val, const PredictionSet& test,
                         const FitConfig& cfg) {
  const std::vector<double> proportions = DefaultProportions();
  return Compare(val, test, cfg, proportions);
}

}  // namespace mcscal
