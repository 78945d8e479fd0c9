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

#include "mcscal/metrics.h"

#include <cmath>
#include <string>

#include "mcscal/error.h"
#include "mcscal/kernels.h"

namespace mcscal {
namespace {

void RequireSamples(std::size_t n) {
  if (n == 0) throw ValidationError("calibration metrics need at least one sample");
}

template <typename Term>
double WeightedBinSum(const BinStats& stats, Term term) {
  RequireSamples(stats.num_samples);
  const double n = static_cast<double>(stats.num_samples);
  double total = 0.0;
  for (const Bin& bin : stats.bins) {
    if (bin.empty()) continue;
    total += (static_cast<double>(bin.count) / n) * term(bin.mean_confidence - bin.mean_accuracy);
  }
  return total;
}

void CheckLengths(std::size_t values, std::size_t sizes) {
  if (values != sizes) {
    throw ValidationError("per-class vectors differ in length: " + std::to_string(values) +
                          " vs " + std::to_string(sizes));
  }
}

double TotalSize(std::span<const std::size_t> class_sizes) {
  std::size_t total = 0;
  for (std::size_t n : class_sizes) total += n;
  if (total == 0) throw ValidationError("class sizes sum to zero");
  return static_cast<double>(total);
}

}  // namespace

double Ece(const BinStats& stats) {
  return WeightedBinSum(stats, [](double gap) { return std::abs(gap); });
}

double Mcs(const BinStats& stats) {
  return WeightedBinSum(stats, [](double gap) { return gap; });
}

double Ece(const ScoredSet& scored, const BinningConfig& cfg) {
  RequireSamples(scored.size());
  return Ece(ComputeBinStats(scored, cfg));
}

double Ece(const ProbabilitySet& probs, const BinningConfig& cfg) {
  return Ece(ScoredSet::FromProbabilities(probs), cfg);
}

double Mcs(const ScoredSet& scored, const BinningConfig& cfg) {
  RequireSamples(scored.size());
  return Mcs(ComputeBinStats(scored, cfg));
}

double Mcs(const ProbabilitySet& probs, const BinningConfig& cfg) {
  return Mcs(ScoredSet::FromProbabilities(probs), cfg);
}

ClassWiseMetrics ComputeClassWise(const ScoredSet& scored, const BinningConfig& cfg) {
  cfg.Validate();
  const int k_count = scored.num_classes();
  const int m_count = cfg.bins;
  // One pass over rows; each (class, bin) cell accumulates in row order,
  // which matches summing over the class subset.
  std::vector<double> conf_sum(static_cast<std::size_t>(k_count) * m_count, 0.0);
  std::vector<std::size_t> hits(conf_sum.size(), 0);
  std::vector<std::size_t> counts(conf_sum.size(), 0);
  for (std::size_t i = 0; i < scored.size(); ++i) {
    const std::size_t cell = static_cast<std::size_t>(scored.labels()[i]) * m_count +
                             (BinAssign(scored.confidence()[i], cfg) - 1);
    conf_sum[cell] += scored.confidence()[i];
    hits[cell] += scored.correct()[i];
    ++counts[cell];
  }

  ClassWiseMetrics out;
  out.class_sizes = ClassSizes(scored.labels(), k_count);
  out.cwece.assign(k_count, 0.0);
  out.cwmcs.assign(k_count, 0.0);
  for (int k = 0; k < k_count; ++k) {
    if (out.class_sizes[k] == 0) continue;
    BinStats stats;
    stats.num_samples = out.class_sizes[k];
    stats.bins.resize(m_count);
    for (int m = 0; m < m_count; ++m) {
      const std::size_t cell = static_cast<std::size_t>(k) * m_count + m;
      Bin& bin = stats.bins[m];
      bin.lo = static_cast<double>(m) / m_count;
      bin.hi = static_cast<double>(m + 1) / m_count;
      bin.count = counts[cell];
      if (bin.count == 0) continue;
      bin.mean_confidence = conf_sum[cell] / static_cast<double>(bin.count);
      bin.mean_accuracy = static_cast<double>(hits[cell]) / static_cast<double>(bin.count);
    }
    out.cwece[k] = Ece(stats);
    out.cwmcs[k] = Mcs(stats);
  }
  return out;
}

ClassWiseMetrics ComputeClassWise(const ProbabilitySet& probs, const BinningConfig& cfg) {
  return ComputeClassWise(ScoredSet::FromProbabilities(probs), cfg);
}

double WeightedSubsetEce(std::span<const double> cwece, std::span<const std::size_t> class_sizes) {
  CheckLengths(cwece.size(), class_sizes.size());
  const double n = TotalSize(class_sizes);
  double total = 0.0;
  for (std::size_t k = 0; k < cwece.size(); ++k) {
    total += (static_cast<double>(class_sizes[k]) / n) * cwece[k];
  }
  return total;
}

double WeightedSubsetMcs(std::span<const double> cwmcs, std::span<const std::size_t> class_sizes) {
  CheckLengths(cwmcs.size(), class_sizes.size());
  const double n = TotalSize(class_sizes);
  const double k_total = static_cast<double>(cwmcs.size());
  double plus = 0.0;
  double minus = 0.0;
  int k_plus = 0;
  int k_minus = 0;
  for (std::size_t k = 0; k < cwmcs.size(); ++k) {
    const double weighted = (static_cast<double>(class_sizes[k]) / n) * cwmcs[k];
    if (cwmcs[k] > 0.0) {
      plus += weighted;
      ++k_plus;
    } else if (cwmcs[k] < 0.0) {
      minus += weighted;
      ++k_minus;
    }
  }
  return (k_plus / k_total) * plus + (k_minus / k_total) * minus;
}

UcOcSummary SummarizeUcOc(std::span<const double> cwmcs) {
  if (cwmcs.empty()) throw ValidationError("UC/OC summary needs at least one class");
  UcOcSummary s;
  double uc_sum = 0.0;
  double oc_sum = 0.0;
  for (double v : cwmcs) {
    if (v < 0.0) {
      uc_sum += v;
      ++s.k_minus;
    } else if (v > 0.0) {
      oc_sum += v;
      ++s.k_plus;
    } else {
      ++s.k_zero;
    }
  }
  const double k_total = static_cast<double>(cwmcs.size());
  if (s.k_minus > 0) s.uc_mean_mcs = uc_sum / s.k_minus;
  if (s.k_plus > 0) s.oc_mean_mcs = oc_sum / s.k_plus;
  s.uc_class_fraction = s.k_minus / k_total;
  s.oc_class_fraction = s.k_plus / k_total;
  s.zero_class_fraction = s.k_zero / k_total;
  return s;
}

double Nll(const ProbabilitySet& probs, Execution exec) {
  RequireSamples(probs.size());
  std::vector<double> per_row(probs.size());
  if (exec == Execution::kParallel) {
    kernels::parallel::TrueClassNegLog(probs.probs(), probs.num_classes(), probs.labels(),
                                       kNllFloor, per_row);
  } else {
    kernels::serial::TrueClassNegLog(probs.probs(), probs.num_classes(), probs.labels(),
                                     kNllFloor, per_row);
  }
  return kernels::SumAscending(per_row) / static_cast<double>(probs.size());
}

CalibrationReport ComputeReport(const ScoredSet& scored, const BinningConfig& cfg) {
  RequireSamples(scored.size());
  CalibrationReport r;
  r.num_samples = scored.size();
  r.num_classes = scored.num_classes();
  r.bins = cfg.bins;
  r.accuracy = scored.Accuracy();
  const BinStats stats = ComputeBinStats(scored, cfg);
  r.ece = Ece(stats);
  r.mcs = Mcs(stats);
  ClassWiseMetrics cw = ComputeClassWise(scored, cfg);
  r.wsece = WeightedSubsetEce(cw.cwece, cw.class_sizes);
  r.wsmcs = WeightedSubsetMcs(cw.cwmcs, cw.class_sizes);
  r.uc_oc = SummarizeUcOc(cw.cwmcs);
  r.cwece = std::move(cw.cwece);
  r.cwmcs = std::move(cw.cwmcs);
  r.class_sizes = std::move(cw.class_sizes);
  return r;
}

CalibrationReport ComputeReport(const ProbabilitySet& probs, const BinningConfig& cfg) {
  return ComputeReport(ScoredSet::FromProbabilities(probs), cfg);
}

}  // namespace mcscal
