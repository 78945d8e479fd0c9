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

#include "cli.h"

#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mcscal/calibrate.h"
#include "mcscal/dataset.h"
#include "mcscal/error.h"
#include "mcscal/failure.h"
#include "mcscal/io.h"
#include "mcscal/metrics.h"
#include "mcscal/report.h"

namespace mcscal::cli {
namespace {

struct Options {
  std::string val;
  std::string test;
  std::string model;
  std::string out;
  std::string format = "auto";
  std::string method = "ts";
  std::string gamma_objective = "ece";
  std::string cwmcs_source = "scaled";
  std::string proportions = "0:0.5:0.05";
  int bins = 15;
  double gamma_step = 0.001;
  double t_lo = 0.05;
  double t_hi = 10.0;
  double t_tol = 1e-4;
};

PredictionSet Load(const std::string& path, const Options& opt) {
  PredictionFileSpec spec;
  spec.format = ParsePredictionFormat(opt.format);
  return LoadPredictions(path, spec);
}

FitConfig MakeFitConfig(const Options& opt) {
  FitConfig cfg;
  cfg.bins.bins = opt.bins;
  cfg.gamma_step = opt.gamma_step;
  cfg.gamma_lo = -1.0 + opt.gamma_step;
  cfg.gamma_hi = 1.0 - opt.gamma_step;
  cfg.gamma_objective = ParseObjective(opt.gamma_objective);
  cfg.cwmcs_source = ParseCwmcsSource(opt.cwmcs_source);
  cfg.t_search_lo = opt.t_lo;
  cfg.t_search_hi = opt.t_hi;
  cfg.t_tolerance = opt.t_tol;
  cfg.Validate();
  return cfg;
}

void Emit(const std::string& text, const Options& opt, std::ostream& out) {
  if (opt.out.empty()) {
    out << text;
  } else {
    WriteTextFile(opt.out, text);
  }
}

std::optional<TemperatureModel> MaybeLoadModel(const Options& opt) {
  if (opt.model.empty()) return std::nullopt;
  return LoadModel(opt.model);
}

void CheckModelFits(const TemperatureModel& model, const PredictionSet& test) {
  if (model.kind == TemperatureKind::kPerClass &&
      model.temperatures.size() != static_cast<std::size_t>(test.num_classes())) {
    throw ValidationError("class count mismatch: model K = " +
                          std::to_string(model.temperatures.size()) +
                          ", test K = " + std::to_string(test.num_classes()));
  }
}

ProbabilitySet Calibrated(const std::optional<TemperatureModel>& model, const PredictionSet& test) {
  if (!model) return Softmax(test);
  CheckModelFits(*model, test);
  return model->Apply(test);
}

int CmdMetrics(const Options& opt, std::ostream& out) {
  const PredictionSet test = Load(opt.test, opt);
  BinningConfig bins{opt.bins};
  Emit(DumpJson(ToJson(ComputeReport(Softmax(test), bins))), opt, out);
  return kExitOk;
}

int CmdFit(const Options& opt, std::ostream& out) {
  const PredictionSet val = Load(opt.val, opt);
  const FitConfig cfg = MakeFitConfig(opt);
  const TemperatureModel model = opt.method == "ts" ? FitScalar(val, cfg) : FitCwmcs(val, cfg);
  SaveModel(model, opt.model);
  out << "method=" << opt.method << " T=" << FormatDouble(model.base_temperature);
  if (model.gamma) out << " gamma=" << FormatDouble(*model.gamma);
  out << " objective=" << ObjectiveName(model.objective)
      << " value=" << FormatDouble(model.fit_objective_value) << "\n";
  return kExitOk;
}

int CmdApply(const Options& opt, bool bins_given, std::ostream& out, std::ostream& err) {
  const PredictionSet test = Load(opt.test, opt);
  const TemperatureModel model = LoadModel(opt.model);
  CheckModelFits(model, test);
  const BinningConfig bins{bins_given ? opt.bins : model.bins};
  const ProbabilitySet calibrated = model.Apply(test);
  const Top1Result before = Top1(Softmax(test));
  const Top1Result after = Top1(calibrated);
  std::size_t changed = 0;
  for (std::size_t i = 0; i < test.size(); ++i) changed += before.predicted[i] != after.predicted[i];
  if (changed > 0) {
    err << "note: calibration changed the predicted class of " << changed << " of "
        << test.size() << " samples\n";
  }
  Emit(DumpJson(ToJson(ComputeReport(calibrated, bins))), opt, out);
  return kExitOk;
}

int CmdRiskCoverage(const Options& opt, std::ostream& out) {
  const PredictionSet test = Load(opt.test, opt);
  const std::vector<double> proportions = ParseProportionGrid(opt.proportions);
  const ProbabilitySet probs = Calibrated(MaybeLoadModel(opt), test);
  Emit(CurveToCsv(RiskCoverage(probs, proportions)), opt, out);
  return kExitOk;
}

int CmdReliability(const Options& opt, bool bins_given, std::ostream& out) {
  const PredictionSet test = Load(opt.test, opt);
  const std::optional<TemperatureModel> model = MaybeLoadModel(opt);
  const BinningConfig bins{(model && !bins_given) ? model->bins : opt.bins};
  Emit(ReliabilityToCsv(Reliability(Calibrated(model, test), bins)), opt, out);
  return kExitOk;
}

int CmdCompare(const Options& opt, std::ostream& out) {
  const PredictionSet val = Load(opt.val, opt);
  const PredictionSet test = Load(opt.test, opt);
  const std::vector<double> proportions = ParseProportionGrid(opt.proportions);
  Emit(DumpJson(ToJson(Compare(val, test, MakeFitConfig(opt), proportions))), opt, out);
  return kExitOk;
}

void AddFormat(CLI::App* cmd, Options& opt) {
  cmd->add_option("--format", opt.format, "Prediction file format")
      ->check(CLI::IsMember({"auto", "csv", "jsonl"}))
      ->capture_default_str();
}

CLI::Option* AddBins(CLI::App* cmd, Options& opt) {
  return cmd->add_option("--bins", opt.bins, "Equal-width confidence bins")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void AddOut(CLI::App* cmd, Options& opt) {
  cmd->add_option("--out", opt.out, "Write output here instead of stdout");
}

void AddFitFlags(CLI::App* cmd, Options& opt) {
  AddBins(cmd, opt);
  cmd->add_option("--gamma-step", opt.gamma_step, "Gamma grid increment")
      ->check(CLI::Range(1e-6, 0.5))
      ->capture_default_str();
  cmd->add_option("--gamma-objective", opt.gamma_objective, "Validation metric minimized over gamma")
      ->check(CLI::IsMember({"ece", "wsece"}))
      ->capture_default_str();
  cmd->add_option("--cwmcs-source", opt.cwmcs_source,
                  "Predictions that feed cwMCS: temperature-scaled or uncalibrated")
      ->check(CLI::IsMember({"scaled", "baseline"}))
      ->capture_default_str();
  cmd->add_option("--t-lo", opt.t_lo, "Lower end of the temperature search")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--t-hi", opt.t_hi, "Upper end of the temperature search")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--t-tol", opt.t_tol, "Temperature search tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Calibration metrics, temperature scaling and failure detection over logit dumps",
               "mcscal"};
  app.require_subcommand(1);

  CLI::App* metrics = app.add_subcommand("metrics", "Calibration report of uncalibrated predictions");
  metrics->add_option("--test", opt.test, "Prediction file")->required();
  AddBins(metrics, opt);
  AddFormat(metrics, opt);
  AddOut(metrics, opt);

  CLI::App* fit = app.add_subcommand("fit", "Fit a temperature model on validation predictions");
  fit->add_option("--val", opt.val, "Validation prediction file")->required();
  fit->add_option("--method", opt.method, "ts or cwmcs-ts")
      ->check(CLI::IsMember({"ts", "cwmcs-ts"}))
      ->capture_default_str();
  fit->add_option("--model", opt.model, "Where to write the model JSON")->required();
  AddFitFlags(fit, opt);
  AddFormat(fit, opt);

  CLI::App* apply = app.add_subcommand("apply", "Calibration report after applying a model");
  apply->add_option("--test", opt.test, "Prediction file")->required();
  apply->add_option("--model", opt.model, "Model JSON")->required();
  CLI::Option* apply_bins = AddBins(apply, opt);
  AddFormat(apply, opt);
  AddOut(apply, opt);

  CLI::App* risk = app.add_subcommand("risk-coverage", "Entropy-ranked risk-coverage curve (CSV)");
  risk->add_option("--test", opt.test, "Prediction file")->required();
  risk->add_option("--model", opt.model, "Optional model JSON; omitted means uncalibrated");
  risk->add_option("--proportions", opt.proportions, "Referred proportions as start:stop:step")
      ->capture_default_str();
  AddFormat(risk, opt);
  AddOut(risk, opt);

  CLI::App* reliability = app.add_subcommand("reliability", "Reliability diagram data (CSV)");
  reliability->add_option("--test", opt.test, "Prediction file")->required();
  reliability->add_option("--model", opt.model, "Optional model JSON; omitted means uncalibrated");
  CLI::Option* reliability_bins = AddBins(reliability, opt);
  AddFormat(reliability, opt);
  AddOut(reliability, opt);

  CLI::App* compare = app.add_subcommand("compare", "Baseline vs TS vs cwMCS TS on a test set");
  compare->add_option("--val", opt.val, "Validation prediction file")->required();
  compare->add_option("--test", opt.test, "Test prediction file")->required();
  compare->add_option("--proportions", opt.proportions, "Referred proportions as start:stop:step")
      ->capture_default_str();
  AddFitFlags(compare, opt);
  AddFormat(compare, opt);
  AddOut(compare, opt);

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("mcscal");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*metrics) return CmdMetrics(opt, out);
    if (*fit) return CmdFit(opt, out);
    if (*apply) return CmdApply(opt, apply_bins->count() > 0, out, err);
    if (*risk) return CmdRiskCoverage(opt, out);
    if (*reliability) return CmdReliability(opt, reliability_bins->count() > 0, out);
    if (*compare) return CmdCompare(opt, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace mcscal::cli
