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

#ifndef MCSCAL_METRICS_H_
#define MCSCAL_METRICS_H_

// Binned calibration metrics.
//
// Sign convention for every miscalibration score (MCS family): positive
// means over-confident (confidence above accuracy), negative means
// under-confident. All sums run in ascending bin / class / row order, so
// results are reproducible bit for bit.

#include <cstddef>
#include <span>
#include <vector>

#include "mcscal/dataset.h"
#include "mcscal/kernels.h"

namespace mcscal {

// Class-level sign bookkeeping over cwMCS. Classes whose score is exactly 0
// count in neither group.
struct UcOcSummary {
  double uc_mean_mcs = 0.0;  // mean over classes with MCS < 0, or 0 if none
  double oc_mean_mcs = 0.0;  // mean over classes with MCS > 0, or 0 if none
  double uc_class_fraction = 0.0;
  double oc_class_fraction = 0.0;
  double zero_class_fraction = 0.0;
  int k_minus = 0;
  int k_plus = 0;
  int k_zero = 0;

  friend bool operator==(const UcOcSummary&, const UcOcSummary&) = default;
};

struct ClassWiseMetrics {
  std::vector<double> cwece;
  std::vector<double> cwmcs;
  std::vector<std::size_t> class_sizes;
};

struct CalibrationReport {
  std::size_t num_samples = 0;
  int num_classes = 0;
  int bins = 0;
  double accuracy = 0.0;
  double ece = 0.0;
  double wsece = 0.0;
  double mcs = 0.0;
  double wsmcs = 0.0;
  std::vector<double> cwece;
  std::vector<double> cwmcs;
  std::vector<std::size_t> class_sizes;
  UcOcSummary uc_oc;

  friend bool operator==(const CalibrationReport&, const CalibrationReport&) = default;
};

// Sum over non-empty bins of (|B_m| / N) * |conf_m - acc_m|.
double Ece(const BinStats& stats);
// Sum over non-empty bins of (|B_m| / N) * (conf_m - acc_m).
double Mcs(const BinStats& stats);

// Both throw ValidationError on an empty set.
double Ece(const ScoredSet& scored, const BinningConfig& cfg);
double Ece(const ProbabilitySet& probs, const BinningConfig& cfg);
double Mcs(const ScoredSet& scored, const BinningConfig& cfg);
double Mcs(const ProbabilitySet& probs, const BinningConfig& cfg);

// ECE and MCS on each true-label subset with the shared binning. An empty
// class gets 0 for both.
ClassWiseMetrics ComputeClassWise(const ScoredSet& scored, const BinningConfig& cfg);
ClassWiseMetrics ComputeClassWise(const ProbabilitySet& probs, const BinningConfig& cfg);

// Class-size weighted mean of per-class ECE.
double WeightedSubsetEce(std::span<const double> cwece, std::span<const std::size_t> class_sizes);

// The under- and over-confident class groups are each weighted by sample
// share, then mixed by the fraction of classes in each group:
//   (k+/K) * sum_{mcs_k > 0} (n_k/N) mcs_k + (k-/K) * sum_{mcs_k < 0} (n_k/N) mcs_k
double WeightedSubsetMcs(std::span<const double> cwmcs, std::span<const std::size_t> class_sizes);

UcOcSummary SummarizeUcOc(std::span<const double> cwmcs);

// Mean negative log-likelihood of the true class; probabilities are floored
// at kNllFloor before the log.
inline constexpr double kNllFloor = 1e-12;
double Nll(const ProbabilitySet& probs, Execution exec = Execution::kParallel);

CalibrationReport ComputeReport(const ScoredSet& scored, const BinningConfig& cfg);
CalibrationReport ComputeReport(const ProbabilitySet& probs, const BinningConfig& cfg);

}  // namespace mcscal

#endif  // MCSCAL_METRICS_H_
