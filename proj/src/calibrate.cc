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

#include "mcscal/calibrate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mcscal/error.h"
#include "mcscal/metrics.h"

namespace mcscal {
namespace {

constexpr double kInvGoldenRatio = 0.6180339887498949;

void CheckTemperature(double t) {
  if (!(std::isfinite(t) && t > 0.0)) {
    throw ValidationError("temperature must be finite and > 0, got " + std::to_string(t));
  }
}

void RequireSamples(const PredictionSet& val) {
  if (val.empty()) throw ValidationError("cannot fit a temperature on an empty set");
}

ProbabilitySet MakeProbabilities(const PredictionSet& pred, std::vector<double> probs) {
  return ProbabilitySet(std::move(probs),
                        std::vector<int>(pred.labels().begin(), pred.labels().end()),
                        pred.num_classes());
}

// NLL of softmax(logits / T) without materializing a validated set.
class NllEvaluator {
 public:
  explicit NllEvaluator(const PredictionSet& val)
      : val_(val), probs_(val.logits().size()), per_row_(val.size()) {}

  double operator()(double temperature) {
    const double t[] = {temperature};
    kernels::parallel::ScaledSoftmax(val_.logits(), val_.num_classes(), t, probs_);
    kernels::parallel::TrueClassNegLog(probs_, val_.num_classes(), val_.labels(), kNllFloor,
                                       per_row_);
    return kernels::SumAscending(per_row_) / static_cast<double>(val_.size());
  }

 private:
  const PredictionSet& val_;
  std::vector<double> probs_;
  std::vector<double> per_row_;
};

double GridObjective(const PredictionSet& val, std::span<const double> temperatures,
                     const FitConfig& cfg, std::vector<double>& probs) {
  const int k = val.num_classes();
  kernels::serial::ScaledSoftmax(val.logits(), k, temperatures, probs);
  std::vector<double> confidence(val.size());
  std::vector<int> predicted(val.size());
  std::vector<std::uint8_t> correct(val.size());
  kernels::serial::Top1(probs, k, val.labels(), confidence, predicted, correct);
  ScoredSet scored(std::move(confidence), std::move(correct),
                   std::vector<int>(val.labels().begin(), val.labels().end()), k);
  if (cfg.gamma_objective == Objective::kWsece) {
    const ClassWiseMetrics cw = ComputeClassWise(scored, cfg.bins);
    return WeightedSubsetEce(cw.cwece, cw.class_sizes);
  }
  return Ece(scored, cfg.bins);
}

}  // namespace

std::string_view ObjectiveName(Objective objective) {
  switch (objective) {
    case Objective::kNll:
      return "nll";
    case Objective::kEce:
      return "ece";
    case Objective::kWsece:
      return "wsece";
  }
  return "unknown";
}

Objective ParseObjective(std::string_view name) {
  if (name == "nll") return Objective::kNll;
  if (name == "ece") return Objective::kEce;
  if (name == "wsece") return Objective::kWsece;
  throw ValidationError("unknown objective '" + std::string(name) + "'");
}

std::string_view CwmcsSourceName(CwmcsSource source) {
  return source == CwmcsSource::kScaled ? "scaled" : "baseline";
}

CwmcsSource ParseCwmcsSource(std::string_view name) {
  if (name == "scaled") return CwmcsSource::kScaled;
  if (name == "baseline") return CwmcsSource::kBaseline;
  throw ValidationError("unknown cwMCS source '" + std::string(name) + "'");
}

void FitConfig::Validate() const {
  bins.Validate();
  if (!(t_search_lo > 0.0 && t_search_lo < t_search_hi && std::isfinite(t_search_hi))) {
    throw ValidationError("temperature bracket must satisfy 0 < lo < hi");
  }
  if (!(t_tolerance > 0.0)) throw ValidationError("temperature tolerance must be > 0");
  if (!(gamma_step > 0.0 && gamma_step < 1.0)) {
    throw ValidationError("gamma step must be in (0, 1)");
  }
  if (gamma_lo < -1.0 + gamma_step / 2 || gamma_hi > 1.0 - gamma_step / 2) {
    throw ValidationError("gamma range must lie within [-1 + step/2, 1 - step/2]");
  }
  if (!(gamma_lo <= gamma_hi)) throw ValidationError("gamma_lo must not exceed gamma_hi");
  if (gamma_objective == Objective::kNll) {
    throw ValidationError("gamma objective must be ece or wsece");
  }
  if (!(zero_mcs_tolerance >= 0.0)) throw ValidationError("zero MCS tolerance must be >= 0");
}

void TemperatureModel::Validate() const {
  if (temperatures.empty()) throw ValidationError("temperature model has no temperatures");
  for (double t : temperatures) CheckTemperature(t);
  CheckTemperature(base_temperature);
  if (bins < 1) throw ValidationError("temperature model bins must be >= 1");
  if (kind == TemperatureKind::kScalar) {
    if (temperatures.size() != 1) throw ValidationError("scalar model needs exactly one T");
    if (gamma.has_value()) throw ValidationError("scalar model cannot carry gamma");
    if (base_temperature != temperatures[0]) {
      throw ValidationError("scalar model base temperature differs from T");
    }
  } else {
    if (!gamma.has_value()) throw ValidationError("per-class model needs gamma");
    if (!(std::abs(*gamma) < 1.0)) throw ValidationError("gamma must satisfy |gamma| < 1");
  }
}

ProbabilitySet TemperatureModel::Apply(const PredictionSet& pred) const {
  Validate();
  if (kind == TemperatureKind::kScalar) return ApplyScalar(pred, temperatures[0]);
  return ApplyVector(pred, temperatures);
}

ProbabilitySet ApplyScalar(const PredictionSet& pred, double temperature) {
  CheckTemperature(temperature);
  std::vector<double> probs(pred.logits().size());
  const double t[] = {temperature};
  kernels::parallel::ScaledSoftmax(pred.logits(), pred.num_classes(), t, probs);
  return MakeProbabilities(pred, std::move(probs));
}

ProbabilitySet ApplyVector(const PredictionSet& pred, std::span<const double> temperatures) {
  if (temperatures.size() != static_cast<std::size_t>(pred.num_classes())) {
    throw ValidationError("temperature vector has " + std::to_string(temperatures.size()) +
                          " entries but the predictions have K = " +
                          std::to_string(pred.num_classes()));
  }
  for (double t : temperatures) CheckTemperature(t);
  std::vector<double> probs(pred.logits().size());
  kernels::parallel::ScaledSoftmax(pred.logits(), pred.num_classes(), temperatures, probs);
  return MakeProbabilities(pred, std::move(probs));
}

TemperatureModel FitScalar(const PredictionSet& val, const FitConfig& cfg) {
  cfg.Validate();
  RequireSamples(val);
  NllEvaluator nll(val);

  double a = std::log(cfg.t_search_lo);
  double b = std::log(cfg.t_search_hi);
  double c = b - kInvGoldenRatio * (b - a);
  double d = a + kInvGoldenRatio * (b - a);
  double fc = nll(std::exp(c));
  double fd = nll(std::exp(d));
  while (std::exp(b) - std::exp(a) > cfg.t_tolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvGoldenRatio * (b - a);
      fc = nll(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvGoldenRatio * (b - a);
      fd = nll(std::exp(d));
    }
  }

  double best_t = std::exp((a + b) / 2);
  double best_value = nll(best_t);
  std::vector<double> anchors = {cfg.t_search_lo, cfg.t_search_hi};
  if (cfg.t_search_lo <= 1.0 && 1.0 <= cfg.t_search_hi) anchors.insert(anchors.begin(), 1.0);
  for (double t : anchors) {
    const double value = nll(t);
    if (value < best_value) {
      best_value = value;
      best_t = t;
    }
  }

  TemperatureModel model;
  model.kind = TemperatureKind::kScalar;
  model.temperatures = {best_t};
  model.base_temperature = best_t;
  model.objective = Objective::kNll;
  model.fit_objective_value = best_value;
  model.bins = cfg.bins.bins;
  return model;
}

std::vector<double> BuildCwmcsTemperature(double temperature, std::span<const double> cwmcs,
                                          double gamma) {
  CheckTemperature(temperature);
  if (!(std::abs(gamma) < 1.0)) {
    throw ValidationError("gamma must satisfy |gamma| < 1, got " + std::to_string(gamma));
  }
  double max_abs = 0.0;
  for (double v : cwmcs) max_abs = std::max(max_abs, std::abs(v));
  std::vector<double> out(cwmcs.size(), temperature);
  if (max_abs == 0.0) return out;
  for (std::size_t k = 0; k < cwmcs.size(); ++k) {
    out[k] = temperature * (1.0 + gamma * (cwmcs[k] / max_abs));
  }
  return out;
}

std::vector<double> GammaGrid(const FitConfig& cfg) {
  cfg.Validate();
  // 1e-9 absorbs the rounding in lo/step, e.g. -0.999 / 0.001.
  const auto first = static_cast<long long>(std::ceil(cfg.gamma_lo / cfg.gamma_step - 1e-9));
  const auto last = static_cast<long long>(std::floor(cfg.gamma_hi / cfg.gamma_step + 1e-9));
  std::vector<double> grid;
  for (long long j = first; j <= last; ++j) {
    const double g = static_cast<double>(j) * cfg.gamma_step;
    if (std::abs(g) < 1.0) grid.push_back(g);
  }
  return grid;
}

std::vector<double> EvaluateGammaGrid(const PredictionSet& val, double temperature,
                                      std::span<const double> cwmcs,
                                      std::span<const double> gammas, const FitConfig& cfg,
                                      Execution exec) {
  cfg.Validate();
  RequireSamples(val);
  if (cwmcs.size() != static_cast<std::size_t>(val.num_classes())) {
    throw ValidationError("cwMCS length does not match K");
  }
  // All temperature vectors are built (and validated) before the parallel region.
  std::vector<std::vector<double>> temps;
  temps.reserve(gammas.size());
  for (double g : gammas) temps.push_back(BuildCwmcsTemperature(temperature, cwmcs, g));

  std::vector<double> objectives(gammas.size());
  const auto n = static_cast<std::ptrdiff_t>(gammas.size());
  if (exec == Execution::kSerial) {
    std::vector<double> probs(val.logits().size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      objectives[i] = GridObjective(val, temps[i], cfg, probs);
    }
    return objectives;
  }
#pragma omp parallel
  {
    std::vector<double> probs(val.logits().size());
#pragma omp for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      objectives[i] = GridObjective(val, temps[i], cfg, probs);
    }
  }
  return objectives;
}

std::size_t SelectGamma(std::span<const double> gammas, std::span<const double> objectives) {
  if (gammas.empty() || gammas.size() != objectives.size()) {
    throw ValidationError("gamma grid and objectives must be non-empty and equal length");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < gammas.size(); ++i) {
    const double g = gammas[i];
    const double bg = gammas[best];
    if (objectives[i] < objectives[best]) {
      best = i;
    } else if (objectives[i] == objectives[best]) {
      if (std::abs(g) < std::abs(bg) || (std::abs(g) == std::abs(bg) && g < bg)) best = i;
    }
  }
  return best;
}

std::vector<double> FittingCwmcs(const PredictionSet& val, double temperature,
                                 const FitConfig& cfg) {
  const ProbabilitySet probs = cfg.cwmcs_source == CwmcsSource::kScaled
                                   ? ApplyScalar(val, temperature)
                                   : Softmax(val);
  std::vector<double> cwmcs = ComputeClassWise(probs, cfg.bins).cwmcs;
  for (double& v : cwmcs) {
    if (std::abs(v) <= cfg.zero_mcs_tolerance) v = 0.0;
  }
  return cwmcs;
}

TemperatureModel FitCwmcs(const PredictionSet& val, const FitConfig& cfg) {
  const TemperatureModel scalar = FitScalar(val, cfg);
  const double t = scalar.temperatures[0];
  const std::vector<double> cwmcs = FittingCwmcs(val, t, cfg);
  const std::vector<double> grid = GammaGrid(cfg);
  if (grid.empty()) throw ValidationError("gamma grid is empty");
  const std::vector<double> objectives = EvaluateGammaGrid(val, t, cwmcs, grid, cfg);
  const std::size_t best = SelectGamma(grid, objectives);

  TemperatureModel model;
  model.kind = TemperatureKind::kPerClass;
  model.temperatures = BuildCwmcsTemperature(t, cwmcs, grid[best]);
  model.base_temperature = t;
  model.gamma = grid[best];
  model.objective = cfg.gamma_objective;
  model.fit_objective_value = objectives[best];
  model.bins = cfg.bins.bins;
  return model;
}

}  // namespace mcscal
