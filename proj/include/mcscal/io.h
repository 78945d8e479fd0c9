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

#ifndef MCSCAL_IO_H_
#define MCSCAL_IO_H_

// File formats.
//
// Prediction dumps
//   CSV:   header "label,logit_0,...,logit_{K-1}", then one row per sample
//          with a base-10 integer label and K decimal logits.
//   JSONL: one object per line, {"label": <int>, "logits": [<K numbers>]}.
//   Blank lines are ignored in both. Row numbers in diagnostics count data
//   rows from 1; line numbers count physical lines from 1.
//
// Outputs
//   Reports, models and curves are JSON with a fixed key order; curves and
//   reliability tables are also written as CSV. Floats use the shortest
//   decimal that round-trips, so identical inputs give identical bytes.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "mcscal/calibrate.h"
#include "mcscal/dataset.h"
#include "mcscal/failure.h"
#include "mcscal/metrics.h"
#include "mcscal/report.h"

namespace mcscal {

enum class PredictionFormat { kAuto, kCsv, kJsonl };

PredictionFormat ParsePredictionFormat(std::string_view name);

struct PredictionFileSpec {
  PredictionFormat format = PredictionFormat::kAuto;
  // When false, offending rows are dropped instead of rejected.
  bool reject_non_finite = true;
  bool reject_out_of_range_labels = true;
};

struct LoadStats {
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
};

// kAuto picks JSONL for .jsonl/.json/.ndjson paths, CSV otherwise.
PredictionSet LoadPredictions(const std::filesystem::path& path,
                              const PredictionFileSpec& spec = {}, LoadStats* stats = nullptr);
// `source` names the input in diagnostics. kAuto sniffs the first
// non-blank character.
PredictionSet ParsePredictions(std::istream& in, const PredictionFileSpec& spec,
                               std::string_view source, LoadStats* stats = nullptr);

using Json = nlohmann::ordered_json;

// Shortest round-trip decimal.
std::string FormatDouble(double value);

Json ToJson(const CalibrationReport& report);
Json ToJson(const TemperatureModel& model);
Json ToJson(const FitConfig& cfg);
Json ToJson(const RiskCoverageCurve& curve);
Json ToJson(const ReliabilityData& data);
Json ToJson(const ComparisonReport& report);

CalibrationReport CalibrationReportFromJson(const Json& json);
TemperatureModel TemperatureModelFromJson(const Json& json);
FitConfig FitConfigFromJson(const Json& json);
RiskCoverageCurve RiskCoverageCurveFromJson(const Json& json);

// Two-space indented JSON with a trailing newline.
std::string DumpJson(const Json& json);

// "proportion,accuracy,remaining_count"
std::string CurveToCsv(const RiskCoverageCurve& curve);
RiskCoverageCurve CurveFromCsv(std::string_view text);
// "lo,hi,count,confidence,accuracy,gap"; empty bins leave the means blank.
std::string ReliabilityToCsv(const ReliabilityData& data);

void WriteTextFile(const std::filesystem::path& path, std::string_view contents);
std::string ReadTextFile(const std::filesystem::path& path);

void SaveReport(const CalibrationReport& report, const std::filesystem::path& path);
CalibrationReport LoadReport(const std::filesystem::path& path);
void SaveModel(const TemperatureModel& model, const std::filesystem::path& path);
TemperatureModel LoadModel(const std::filesystem::path& path);
void SaveCurve(const RiskCoverageCurve& curve, const std::filesystem::path& path);
// Reads JSON when the extension is .json, CSV otherwise.
RiskCoverageCurve LoadCurve(const std::filesystem::path& path);
void SaveCurveJson(const RiskCoverageCurve& curve, const std::filesystem::path& path);
void SaveReliability(const ReliabilityData& data, const std::filesystem::path& path);
void SaveComparison(const ComparisonReport& report, const std::filesystem::path& path);

}  // namespace mcscal

#endif  // MCSCAL_IO_H_
