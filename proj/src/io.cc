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

#include "mcscal/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "mcscal/error.h"

namespace mcscal {
namespace {

std::string_view Trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string Where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

std::string RowWhere(std::string_view source, std::size_t row, std::size_t line) {
  return Where(source, line) + ": row " + std::to_string(row);
}

// Accumulates validated rows; applies the strictness flags.
class RowSink {
 public:
  RowSink(const PredictionFileSpec& spec, std::string_view source)
      : spec_(spec), source_(source) {}

  void SetClasses(int k) { num_classes_ = k; }
  int num_classes() const { return num_classes_; }

  void Add(std::size_t row, std::size_t line, long long label, std::vector<double>& values) {
    ++rows_read_;
    if (label < 0 || label >= num_classes_) {
      if (spec_.reject_out_of_range_labels) {
        throw ValidationError(RowWhere(source_, row, line) + ": label " +
                              std::to_string(label) + " outside [0, " +
                              std::to_string(num_classes_) + ")");
      }
      ++rows_dropped_;
      return;
    }
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (!std::isfinite(values[c])) {
        if (spec_.reject_non_finite) {
          throw ValidationError(RowWhere(source_, row, line) + ": non-finite logit_" +
                                std::to_string(c));
        }
        ++rows_dropped_;
        return;
      }
    }
    logits_.insert(logits_.end(), values.begin(), values.end());
    labels_.push_back(static_cast<int>(label));
  }

  PredictionSet Finish(LoadStats* stats) {
    if (stats != nullptr) *stats = LoadStats{rows_read_, rows_dropped_};
    if (num_classes_ == 0) throw FormatError(std::string(source_) + ": no header or records");
    if (labels_.empty()) throw ValidationError(std::string(source_) + ": no samples");
    return PredictionSet(std::move(logits_), std::move(labels_), num_classes_);
  }

 private:
  const PredictionFileSpec& spec_;
  std::string_view source_;
  int num_classes_ = 0;
  std::vector<double> logits_;
  std::vector<int> labels_;
  std::size_t rows_read_ = 0;
  std::size_t rows_dropped_ = 0;
};

PredictionSet ParseCsv(std::istream& in, const PredictionFileSpec& spec, std::string_view source,
                       LoadStats* stats) {
  RowSink sink(spec, source);
  std::string line;
  std::size_t line_no = 0;
  std::size_t row = 0;
  bool have_header = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = Trim(line);
    if (text.empty()) continue;
    const std::vector<std::string_view> fields = SplitCommas(text);
    if (!have_header) {
      bool ok = fields.size() >= 2 && fields[0] == "label";
      for (std::size_t c = 1; ok && c < fields.size(); ++c) {
        ok = fields[c] == "logit_" + std::to_string(c - 1);
      }
      if (!ok) {
        throw FormatError(Where(source, line_no) +
                          ": malformed header, expected label,logit_0,...,logit_{K-1}");
      }
      sink.SetClasses(static_cast<int>(fields.size() - 1));
      have_header = true;
      continue;
    }
    ++row;
    if (fields.size() != static_cast<std::size_t>(sink.num_classes()) + 1) {
      throw ValidationError(RowWhere(source, row, line_no) + ": expected " +
                            std::to_string(sink.num_classes() + 1) + " fields (K = " +
                            std::to_string(sink.num_classes()) + "), got " +
                            std::to_string(fields.size()));
    }
    long long label = 0;
    {
      const std::string_view f = fields[0];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), label, 10);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
        throw FormatError(RowWhere(source, row, line_no) + ": label '" + std::string(f) +
                          "' is not a base-10 integer");
      }
    }
    values.assign(fields.size() - 1, 0.0);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const std::string_view f = fields[c];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), values[c - 1]);
      const bool out_of_range = ec == std::errc::result_out_of_range;
      if (f.empty() || (ec != std::errc() && !out_of_range) || ptr != f.data() + f.size()) {
        throw FormatError(RowWhere(source, row, line_no) + ": logit_" + std::to_string(c - 1) +
                          " '" + std::string(f) + "' is not a number");
      }
      if (out_of_range) values[c - 1] = std::numeric_limits<double>::infinity();
    }
    sink.Add(row, line_no, label, values);
  }
  return sink.Finish(stats);
}

PredictionSet ParseJsonl(std::istream& in, const PredictionFileSpec& spec,
                         std::string_view source, LoadStats* stats) {
  RowSink sink(spec, source);
  std::string line;
  std::size_t line_no = 0;
  std::size_t row = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    ++row;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw FormatError(Where(source, line_no) + ": invalid JSON: " + e.what());
    }
    if (!record.is_object() || !record.contains("label") || !record.contains("logits")) {
      throw FormatError(Where(source, line_no) +
                        ": expected an object with \"label\" and \"logits\"");
    }
    const Json& label = record["label"];
    const Json& logits = record["logits"];
    if (!label.is_number_integer()) {
      throw FormatError(RowWhere(source, row, line_no) + ": label must be an integer");
    }
    if (!logits.is_array() || logits.empty()) {
      throw FormatError(RowWhere(source, row, line_no) + ": logits must be a non-empty array");
    }
    if (sink.num_classes() == 0) sink.SetClasses(static_cast<int>(logits.size()));
    if (logits.size() != static_cast<std::size_t>(sink.num_classes())) {
      throw ValidationError(RowWhere(source, row, line_no) + ": " +
                            std::to_string(logits.size()) + " logits but K = " +
                            std::to_string(sink.num_classes()) + " from the first record");
    }
    values.clear();
    for (const Json& v : logits) {
      if (!v.is_number()) {
        throw FormatError(RowWhere(source, row, line_no) + ": logits must be numbers");
      }
      values.push_back(v.get<double>());
    }
    sink.Add(row, line_no, label.get<long long>(), values);
  }
  return sink.Finish(stats);
}

PredictionFormat FormatForPath(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") return PredictionFormat::kJsonl;
  return PredictionFormat::kCsv;
}

Json OptionalNumber(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string_view KindName(TemperatureKind kind) {
  return kind == TemperatureKind::kScalar ? "scalar" : "per-class";
}

template <typename T>
T Field(const Json& json, const char* key) {
  if (!json.contains(key)) throw FormatError(std::string("missing JSON field '") + key + "'");
  try {
    return json.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("bad JSON field '") + key + "': " + e.what());
  }
}

}  // namespace

PredictionFormat ParsePredictionFormat(std::string_view name) {
  if (name == "auto") return PredictionFormat::kAuto;
  if (name == "csv") return PredictionFormat::kCsv;
  if (name == "jsonl") return PredictionFormat::kJsonl;
  throw ValidationError("unknown prediction format '" + std::string(name) + "'");
}

PredictionSet LoadPredictions(const std::filesystem::path& path, const PredictionFileSpec& spec,
                              LoadStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  PredictionFileSpec resolved = spec;
  if (resolved.format == PredictionFormat::kAuto) resolved.format = FormatForPath(path);
  return ParsePredictions(in, resolved, path.string(), stats);
}

PredictionSet ParsePredictions(std::istream& in, const PredictionFileSpec& spec,
                               std::string_view source, LoadStats* stats) {
  PredictionFormat format = spec.format;
  if (format == PredictionFormat::kAuto) {
    in >> std::ws;
    format = in.peek() == '{' ? PredictionFormat::kJsonl : PredictionFormat::kCsv;
  }
  if (format == PredictionFormat::kJsonl) return ParseJsonl(in, spec, source, stats);
  return ParseCsv(in, spec, source, stats);
}

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

Json ToJson(const CalibrationReport& r) {
  Json uc_oc = {
      {"uc_mean_mcs", r.uc_oc.uc_mean_mcs},
      {"oc_mean_mcs", r.uc_oc.oc_mean_mcs},
      {"uc_class_fraction", r.uc_oc.uc_class_fraction},
      {"oc_class_fraction", r.uc_oc.oc_class_fraction},
      {"zero_class_fraction", r.uc_oc.zero_class_fraction},
      {"k_minus", r.uc_oc.k_minus},
      {"k_plus", r.uc_oc.k_plus},
      {"k_zero", r.uc_oc.k_zero},
  };
  return Json{
      {"num_samples", r.num_samples},
      {"num_classes", r.num_classes},
      {"bins", r.bins},
      {"accuracy", r.accuracy},
      {"ece", r.ece},
      {"ece_percent", r.ece * 100.0},
      {"wsece", r.wsece},
      {"wsece_percent", r.wsece * 100.0},
      {"mcs", r.mcs},
      {"wsmcs", r.wsmcs},
      {"cwece", r.cwece},
      {"cwmcs", r.cwmcs},
      {"class_sizes", r.class_sizes},
      {"uc_oc", std::move(uc_oc)},
  };
}

CalibrationReport CalibrationReportFromJson(const Json& json) {
  CalibrationReport r;
  r.num_samples = Field<std::size_t>(json, "num_samples");
  r.num_classes = Field<int>(json, "num_classes");
  r.bins = Field<int>(json, "bins");
  r.accuracy = Field<double>(json, "accuracy");
  r.ece = Field<double>(json, "ece");
  r.wsece = Field<double>(json, "wsece");
  r.mcs = Field<double>(json, "mcs");
  r.wsmcs = Field<double>(json, "wsmcs");
  r.cwece = Field<std::vector<double>>(json, "cwece");
  r.cwmcs = Field<std::vector<double>>(json, "cwmcs");
  r.class_sizes = Field<std::vector<std::size_t>>(json, "class_sizes");
  const Json uc_oc = Field<Json>(json, "uc_oc");
  r.uc_oc.uc_mean_mcs = Field<double>(uc_oc, "uc_mean_mcs");
  r.uc_oc.oc_mean_mcs = Field<double>(uc_oc, "oc_mean_mcs");
  r.uc_oc.uc_class_fraction = Field<double>(uc_oc, "uc_class_fraction");
  r.uc_oc.oc_class_fraction = Field<double>(uc_oc, "oc_class_fraction");
  r.uc_oc.zero_class_fraction = Field<double>(uc_oc, "zero_class_fraction");
  r.uc_oc.k_minus = Field<int>(uc_oc, "k_minus");
  r.uc_oc.k_plus = Field<int>(uc_oc, "k_plus");
  r.uc_oc.k_zero = Field<int>(uc_oc, "k_zero");
  return r;
}

Json ToJson(const TemperatureModel& m) {
  Json json;
  json["kind"] = KindName(m.kind);
  if (m.kind == TemperatureKind::kScalar) {
    json["T"] = m.temperatures.at(0);
  } else {
    json["T"] = m.temperatures;
    json["base_T"] = m.base_temperature;
    json["gamma"] = m.gamma.value_or(0.0);
  }
  json["objective_name"] = ObjectiveName(m.objective);
  json["fit_objective_value"] = m.fit_objective_value;
  json["bins"] = m.bins;
  return json;
}

TemperatureModel TemperatureModelFromJson(const Json& json) {
  TemperatureModel m;
  const std::string kind = Field<std::string>(json, "kind");
  if (kind == "scalar") {
    m.kind = TemperatureKind::kScalar;
    m.temperatures = {Field<double>(json, "T")};
    m.base_temperature = m.temperatures[0];
  } else if (kind == "per-class") {
    m.kind = TemperatureKind::kPerClass;
    m.temperatures = Field<std::vector<double>>(json, "T");
    m.base_temperature = Field<double>(json, "base_T");
    m.gamma = Field<double>(json, "gamma");
  } else {
    throw FormatError("unknown model kind '" + kind + "'");
  }
  m.objective = ParseObjective(Field<std::string>(json, "objective_name"));
  m.fit_objective_value = Field<double>(json, "fit_objective_value");
  m.bins = Field<int>(json, "bins");
  m.Validate();
  return m;
}

Json ToJson(const FitConfig& cfg) {
  return Json{
      {"bins", cfg.bins.bins},
      {"t_search_lo", cfg.t_search_lo},
      {"t_search_hi", cfg.t_search_hi},
      {"t_tolerance", cfg.t_tolerance},
      {"gamma_step", cfg.gamma_step},
      {"gamma_lo", cfg.gamma_lo},
      {"gamma_hi", cfg.gamma_hi},
      {"gamma_objective", ObjectiveName(cfg.gamma_objective)},
      {"cwmcs_source", CwmcsSourceName(cfg.cwmcs_source)},
      {"zero_mcs_tolerance", cfg.zero_mcs_tolerance},
  };
}

FitConfig FitConfigFromJson(const Json& json) {
  FitConfig cfg;
  cfg.bins.bins = Field<int>(json, "bins");
  cfg.t_search_lo = Field<double>(json, "t_search_lo");
  cfg.t_search_hi = Field<double>(json, "t_search_hi");
  cfg.t_tolerance = Field<double>(json, "t_tolerance");
  cfg.gamma_step = Field<double>(json, "gamma_step");
  cfg.gamma_lo = Field<double>(json, "gamma_lo");
  cfg.gamma_hi = Field<double>(json, "gamma_hi");
  cfg.gamma_objective = ParseObjective(Field<std::string>(json, "gamma_objective"));
  cfg.cwmcs_source = ParseCwmcsSource(Field<std::string>(json, "cwmcs_source"));
  cfg.zero_mcs_tolerance = Field<double>(json, "zero_mcs_tolerance");
  cfg.Validate();
  return cfg;
}

Json ToJson(const RiskCoverageCurve& curve) {
  Json points = Json::array();
  for (const RiskCoveragePoint& p : curve.points) {
    points.push_back(Json{{"proportion", p.proportion},
                          {"accuracy", p.accuracy},
                          {"remaining_count", p.remaining_count},
                          {"degenerate", p.degenerate}});
  }
  return Json{{"points", std::move(points)}};
}

RiskCoverageCurve RiskCoverageCurveFromJson(const Json& json) {
  RiskCoverageCurve curve;
  for (const Json& p : Field<Json>(json, "points")) {
    curve.points.push_back(RiskCoveragePoint{
        Field<double>(p, "proportion"), Field<double>(p, "accuracy"),
        Field<std::size_t>(p, "remaining_count"), Field<bool>(p, "degenerate")});
  }
  return curve;
}

Json ToJson(const ReliabilityData& data) {
  Json rows = Json::array();
  for (const ReliabilityRow& row : data.rows) {
    rows.push_back(Json{{"lo", row.lo},
                        {"hi", row.hi},
                        {"count", row.count},
                        {"confidence", OptionalNumber(row.confidence)},
                        {"accuracy", OptionalNumber(row.accuracy)},
                        {"gap", OptionalNumber(row.gap)}});
  }
  return Json{{"num_samples", data.num_samples},
              {"accuracy", data.accuracy},
              {"mean_confidence", data.mean_confidence},
              {"bins", std::move(rows)}};
}

Json ToJson(const ComparisonReport& report) {
  Json methods = Json::object();
  for (const MethodEntry& m : report.methods) {
    methods[m.name] = Json{
        {"model", m.model ? ToJson(*m.model) : Json(nullptr)},
        {"argmax_changed", m.argmax_changed},
        {"report", ToJson(m.calibration)},
        {"reliability", ToJson(m.reliability)},
        {"risk_coverage", ToJson(m.risk_coverage)},
    };
  }
  return Json{{"fit_config", ToJson(report.fit_config)},
              {"proportions", report.proportions},
              {"val_samples", report.val_samples},
              {"test_samples", report.test_samples},
              {"num_classes", report.num_classes},
              {"methods", std::move(methods)}};
}

std::string DumpJson(const Json& json) { return json.dump(2) + "\n"; }

std::string CurveToCsv(const RiskCoverageCurve& curve) {
  std::string out = "proportion,accuracy,remaining_count\n";
  for (const RiskCoveragePoint& p : curve.points) {
    out += FormatDouble(p.proportion) + "," + FormatDouble(p.accuracy) + "," +
           std::to_string(p.remaining_count) + "\n";
  }
  return out;
}

RiskCoverageCurve CurveFromCsv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  RiskCoverageCurve curve;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = Trim(line);
    if (trimmed.empty()) continue;
    if (line_no == 1) {
      if (trimmed != "proportion,accuracy,remaining_count") {
        throw FormatError("curve CSV line 1: unexpected header");
      }
      continue;
    }
    const std::vector<std::string_view> f = SplitCommas(trimmed);
    RiskCoveragePoint p;
    bool ok = f.size() == 3;
    if (ok) {
      auto r1 = std::from_chars(f[0].data(), f[0].data() + f[0].size(), p.proportion);
      auto r2 = std::from_chars(f[1].data(), f[1].data() + f[1].size(), p.accuracy);
      auto r3 = std::from_chars(f[2].data(), f[2].data() + f[2].size(), p.remaining_count);
      ok = r1.ec == std::errc() && r2.ec == std::errc() && r3.ec == std::errc() &&
           r1.ptr == f[0].data() + f[0].size() && r2.ptr == f[1].data() + f[1].size() &&
           r3.ptr == f[2].data() + f[2].size();
    }
    if (!ok) throw FormatError("curve CSV line " + std::to_string(line_no) + ": malformed row");
    p.degenerate = p.remaining_count == 0;
    curve.points.push_back(p);
  }
  if (line_no == 0) throw FormatError("curve CSV is empty");
  return curve;
}

std::string ReliabilityToCsv(const ReliabilityData& data) {
  std::string out = "lo,hi,count,confidence,accuracy,gap\n";
  const auto opt = [](const std::optional<double>& v) { return v ? FormatDouble(*v) : ""; };
  for (const ReliabilityRow& row : data.rows) {
    out += FormatDouble(row.lo) + "," + FormatDouble(row.hi) + "," + std::to_string(row.count) +
           "," + opt(row.confidence) + "," + opt(row.accuracy) + "," + opt(row.gap) + "\n";
  }
  return out;
}

void WriteTextFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

namespace {

Json ReadJsonFile(const std::filesystem::path& path) {
  try {
    return Json::parse(ReadTextFile(path));
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": invalid JSON: " + e.what());
  }
}

}  // namespace

void SaveReport(const CalibrationReport& report, const std::filesystem::path& path) {
  WriteTextFile(path, DumpJson(ToJson(report)));
}

CalibrationReport LoadReport(const std::filesystem::path& path) {
  return CalibrationReportFromJson(ReadJsonFile(path));
}

void SaveModel(const TemperatureModel& model, const std::filesystem::path& path) {
  WriteTextFile(path, DumpJson(ToJson(model)));
}

TemperatureModel LoadModel(const std::filesystem::path& path) {
  try {
    return TemperatureModelFromJson(ReadJsonFile(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void SaveCurve(const RiskCoverageCurve& curve, const std::filesystem::path& path) {
  WriteTextFile(path, CurveToCsv(curve));
}

RiskCoverageCurve LoadCurve(const std::filesystem::path& path) {
  if (path.extension() == ".json") return RiskCoverageCurveFromJson(ReadJsonFile(path));
  return CurveFromCsv(ReadTextFile(path));
}

void SaveCurveJson(const RiskCoverageCurve& curve, const std::filesystem::path& path) {
  WriteTextFile(path, DumpJson(ToJson(curve)));
}

void SaveReliability(const ReliabilityData& data, const std::filesystem::path& path) {
  WriteTextFile(path, ReliabilityToCsv(data));
}

void SaveComparison(const ComparisonReport& report, const std::filesystem::path& path) {
  WriteTextFile(path, DumpJson(ToJson(report)));
}

}  // namespace mcscal
