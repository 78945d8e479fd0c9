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

#ifndef MCSCAL_CALIBRATE_H_
#define MCSCAL_CALIBRATE_H_

// Post-hoc temperature calibrators.
//
// Scalar temperature scaling divides every logit by one fitted T. The
// class-wise variant perturbs that T per class using the class-wise
// miscalibration score:
//
//   T_k = T * (1 + gamma * c_k),   c = cwMCS / max_j |cwMCS_j|
//
// and divides logit coordinate k by T_k. gamma is picked by exhaustive grid
// search on a validation set. With gamma > 0 an under-confident class
// (negative score) gets a smaller temperature than T and an over-confident
// class a larger one.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mcscal/dataset.h"
#include "mcscal/kernels.h"

namespace mcscal {

enum class Objective { kNll, kEce, kWsece };

std::string_view ObjectiveName(Objective objective);
// Throws ValidationError for unknown names.
Objective ParseObjective(std::string_view name);

// Which predictions feed the cwMCS used to build the temperature vector.
enum class CwmcsSource { kScaled, kBaseline };

std::string_view CwmcsSourceName(CwmcsSource source);
CwmcsSource ParseCwmcsSource(std::string_view name);

struct FitConfig {
  double t_search_lo = 0.05;
  double t_search_hi = 10.0;
  double t_tolerance = 1e-4;
  double gamma_step = 0.001;
  double gamma_lo = -0.999;
  double gamma_hi = 0.999;
  Objective gamma_objective = Objective::kEce;
  CwmcsSource cwmcs_source = CwmcsSource::kScaled;
  // Class scores with magnitude at or below this become exactly zero
  // before max-normalization.
  double zero_mcs_tolerance = 1e-12;
  BinningConfig bins;

  void Validate() const;
  friend bool operator==(const FitConfig&, const FitConfig&) = default;
};

enum class TemperatureKind { kScalar, kPerClass };

struct TemperatureModel {
  TemperatureKind kind = TemperatureKind::kScalar;
  // One entry for kScalar, K entries for kPerClass.
  std::vector<double> temperatures;
  // The scalar T the per-class vector was derived from (equals
  // temperatures[0] for kScalar).
  double base_temperature = 1.0;
  std::optional<double> gamma;
  Objective objective = Objective::kNll;
  double fit_objective_value = 0.0;
  int bins = 15;

  // Throws ValidationError when an invariant is broken.
  void Validate() const;
  // Throws ValidationError when a per-class model does not match `pred`.
  ProbabilitySet Apply(const PredictionSet& pred) const;

  friend bool operator==(const TemperatureModel&, const TemperatureModel&) = default;
};

ProbabilitySet ApplyScalar(const PredictionSet& pred, double temperature);
ProbabilitySet ApplyVector(const PredictionSet& pred, std::span<const double> temperatures);

// Validation NLL minimized by golden-section search over ln T. The result
// never scores worse than T = 1 or either bracket end.
TemperatureModel FitScalar(const PredictionSet& val, const FitConfig& cfg);

std::vector<double> BuildCwmcsTemperature(double temperature, std::span<const double> cwmcs,
                                          double gamma);

// Multiples of gamma_step inside [gamma_lo, gamma_hi], ascending. Anchoring
// on integer multiples keeps gamma = 0 exactly representable in the grid.
std::vector<double> GammaGrid(const FitConfig& cfg);

// Objective (ECE or wsECE under cfg.bins) of ApplyVector(val, T_gamma) for
// each gamma. Grid points are independent; kParallel spreads them over
// threads and returns the same values as kSerial.
std::vector<double> EvaluateGammaGrid(const PredictionSet& val, double temperature,
                                      std::span<const double> cwmcs,
                                      std::span<const double> gammas, const FitConfig& cfg,
                                      Execution exec = Execution::kParallel);

// Index of the best grid point: lowest objective, then smallest |gamma|,
// then the more negative gamma.
std::size_t SelectGamma(std::span<const double> gammas, std::span<const double> objectives);

// cwMCS passed to BuildCwmcsTemperature during fitting, after the zero
// tolerance is applied.
std::vector<double> FittingCwmcs(const PredictionSet& val, double temperature,
                                 const FitConfig& cfg);

TemperatureModel FitCwmcs(const PredictionSet& val, const FitConfig& cfg);

}  // namespace mcscal

#endif  // MCSCAL_CALIBRATE_H_
