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

#include "mcscal/dataset.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mcscal/error.h"
#include "mcscal/kernels.h"

namespace mcscal {
namespace {

void CheckShape(std::size_t values, std::size_t rows, int num_classes, const char* what) {
  if (num_classes < 1) {
    throw ValidationError(std::string(what) + ": class count must be >= 1, got " +
                          std::to_string(num_classes));
  }
  if (values != rows * static_cast<std::size_t>(num_classes)) {
    throw ValidationError(std::string(what) + ": expected " + std::to_string(rows) + " x " +
                          std::to_string(num_classes) + " values, got " +
                          std::to_string(values));
  }
}

void CheckLabels(std::span<const int> labels, int num_classes, const char* what) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw ValidationError(std::string(what) + ": label " + std::to_string(labels[i]) +
                            " at row " + std::to_string(i) + " outside [0, " +
                            std::to_string(num_classes) + ")");
    }
  }
}

template <typename T>
std::vector<T> SelectRows(std::span<const T> values, std::span<const int> labels, int k,
                          std::size_t width) {
  std::vector<T> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != k) continue;
    auto begin = values.begin() + static_cast<std::ptrdiff_t>(i * width);
    out.insert(out.end(), begin, begin + static_cast<std::ptrdiff_t>(width));
  }
  return out;
}

void CheckClassIndex(int k, int num_classes) {
  if (k < 0 || k >= num_classes) {
    throw ValidationError("class index " + std::to_string(k) + " outside [0, " +
                          std::to_string(num_classes) + ")");
  }
}

}  // namespace

PredictionSet::PredictionSet(std::vector<double> logits, std::vector<int> labels,
                             int num_classes)
    : logits_(std::move(logits)), labels_(std::move(labels)), num_classes_(num_classes) {
  CheckShape(logits_.size(), labels_.size(), num_classes_, "PredictionSet");
  CheckLabels(labels_, num_classes_, "PredictionSet");
  for (std::size_t i = 0; i < logits_.size(); ++i) {
    if (!std::isfinite(logits_[i])) {
      throw ValidationError("PredictionSet: non-finite logit at row " +
                            std::to_string(i / static_cast<std::size_t>(num_classes_)) +
                            ", class " +
                            std::to_string(i % static_cast<std::size_t>(num_classes_)));
    }
  }
}

std::span<const double> PredictionSet::row(std::size_t i) const {
  return std::span<const double>(logits_).subspan(i * num_classes_, num_classes_);
}

ProbabilitySet::ProbabilitySet(std::vector<double> probs, std::vector<int> labels,
                               int num_classes)
    : probs_(std::move(probs)), labels_(std::move(labels)), num_classes_(num_classes) {
  CheckShape(probs_.size(), labels_.size(), num_classes_, "ProbabilitySet");
  CheckLabels(labels_, num_classes_, "ProbabilitySet");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    double sum = 0.0;
    for (double p : row(i)) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("ProbabilitySet: entry outside [0, 1] at row " +
                              std::to_string(i));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw ValidationError("ProbabilitySet: row " + std::to_string(i) + " sums to " +
                            std::to_string(sum));
    }
  }
}

std::span<const double> ProbabilitySet::row(std::size_t i) const {
  return std::span<const double>(probs_).subspan(i * num_classes_, num_classes_);
}

void BinningConfig::Validate() const {
  if (bins < 1) {
    throw ValidationError("bin count must be >= 1, got " + std::to_string(bins));
  }
}

ScoredSet::ScoredSet(std::vector<double> confidence, std::vector<std::uint8_t> correct,
                     std::vector<int> labels, int num_classes)
    : confidence_(std::move(confidence)),
      correct_(std::move(correct)),
      labels_(std::move(labels)),
      num_classes_(num_classes) {
  if (num_classes_ < 1) throw ValidationError("ScoredSet: class count must be >= 1");
  if (confidence_.size() != labels_.size() || correct_.size() != labels_.size()) {
    throw ValidationError("ScoredSet: confidence, correct and labels differ in length");
  }
  CheckLabels(labels_, num_classes_, "ScoredSet");
  for (std::size_t i = 0; i < confidence_.size(); ++i) {
    if (!(confidence_[i] >= 0.0 && confidence_[i] <= 1.0)) {
      throw ValidationError("ScoredSet: confidence outside [0, 1] at row " +
                            std::to_string(i));
    }
    if (correct_[i] > 1) throw ValidationError("ScoredSet: correctness must be 0 or 1");
  }
}

ScoredSet ScoredSet::FromProbabilities(const ProbabilitySet& probs) {
  Top1Result top = Top1(probs);
  return ScoredSet(std::move(top.confidence), std::move(top.correct),
                   std::vector<int>(probs.labels().begin(), probs.labels().end()),
                   probs.num_classes());
}

double ScoredSet::Accuracy() const {
  if (empty()) throw ValidationError("accuracy of an empty set");
  std::size_t hits = 0;
  for (std::uint8_t c : correct_) hits += c;
  return static_cast<double>(hits) / static_cast<double>(size());
}

double ScoredSet::MeanConfidence() const {
  if (empty()) throw ValidationError("mean confidence of an empty set");
  return kernels::SumAscending(confidence_) / static_cast<double>(size());
}

ProbabilitySet Softmax(const PredictionSet& pred) {
  std::vector<double> probs(pred.logits().size());
  kernels::parallel::ScaledSoftmax(pred.logits(), pred.num_classes(), {}, probs);
  return ProbabilitySet(std::move(probs),
                        std::vector<int>(pred.labels().begin(), pred.labels().end()),
                        pred.num_classes());
}

Top1Result Top1(const ProbabilitySet& probs) {
  Top1Result out;
  out.confidence.resize(probs.size());
  out.predicted.resize(probs.size());
  out.correct.resize(probs.size());
  kernels::parallel::Top1(probs.probs(), probs.num_classes(), probs.labels(), out.confidence,
                          out.predicted, out.correct);
  return out;
}

int BinAssign(double confidence, const BinningConfig& cfg) {
  cfg.Validate();
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw ValidationError("confidence " + std::to_string(confidence) + " outside [0, 1]");
  }
  const double scaled = std::ceil(confidence * cfg.bins);
  return std::clamp(static_cast<int>(scaled), 1, cfg.bins);
}

BinStats ComputeBinStats(const ScoredSet& scored, const BinningConfig& cfg) {
  cfg.Validate();
  const int m_count = cfg.bins;
  std::vector<double> conf_sum(m_count, 0.0);
  std::vector<std::size_t> hits(m_count, 0);
  BinStats stats;
  stats.num_samples = scored.size();
  stats.bins.resize(m_count);
  for (std::size_t i = 0; i < scored.size(); ++i) {
    const int m = BinAssign(scored.confidence()[i], cfg) - 1;
    conf_sum[m] += scored.confidence()[i];
    hits[m] += scored.correct()[i];
    ++stats.bins[m].count;
  }
  for (int m = 0; m < m_count; ++m) {
    Bin& bin = stats.bins[m];
    bin.lo = static_cast<double>(m) / m_count;
    bin.hi = static_cast<double>(m + 1) / m_count;
    if (bin.count == 0) continue;
    const double n = static_cast<double>(bin.count);
    bin.mean_confidence = conf_sum[m] / n;
    bin.mean_accuracy = static_cast<double>(hits[m]) / n;
  }
  return stats;
}

BinStats ComputeBinStats(const ProbabilitySet& probs, const BinningConfig& cfg) {
  return ComputeBinStats(ScoredSet::FromProbabilities(probs), cfg);
}

PredictionSet ClassSubset(const PredictionSet& pred, int k) {
  CheckClassIndex(k, pred.num_classes());
  const std::size_t width = static_cast<std::size_t>(pred.num_classes());
  return PredictionSet(SelectRows(pred.logits(), pred.labels(), k, width),
                       SelectRows(pred.labels(), pred.labels(), k, 1), pred.num_classes());
}

ProbabilitySet ClassSubset(const ProbabilitySet& probs, int k) {
  CheckClassIndex(k, probs.num_classes());
  const std::size_t width = static_cast<std::size_t>(probs.num_classes());
  return ProbabilitySet(SelectRows(probs.probs(), probs.labels(), k, width),
                        SelectRows(probs.labels(), probs.labels(), k, 1),
                        probs.num_classes());
}

ScoredSet ClassSubset(const ScoredSet& scored, int k) {
  CheckClassIndex(k, scored.num_classes());
  return ScoredSet(SelectRows(scored.confidence(), scored.labels(), k, 1),
                   SelectRows(scored.correct(), scored.labels(), k, 1),
                   SelectRows(scored.labels(), scored.labels(), k, 1), scored.num_classes());
}

std::vector<double> Entropy(const ProbabilitySet& probs) {
  std::vector<double> out(probs.size());
  kernels::parallel::Entropy(probs.probs(), probs.num_classes(), out);
  return out;
}

std::vector<std::size_t> ClassSizes(std::span<const int> labels, int num_classes) {
  std::vector<std::size_t> sizes(num_classes, 0);
  for (int y : labels) ++sizes[y];
  return sizes;
}

}  // namespace mcscal
