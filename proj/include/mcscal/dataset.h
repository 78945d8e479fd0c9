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

#ifndef MCSCAL_DATASET_H_
#define MCSCAL_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mcscal {

// Row-major N x K logits with one true label per row.
//
// Every label lies in [0, K) and every logit is finite; the constructor
// throws ValidationError otherwise. A set may be empty (a class subset with
// no members); operations that need samples check for that themselves.
class PredictionSet {
 public:
  PredictionSet(std::vector<double> logits, std::vector<int> labels, int num_classes);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  int num_classes() const { return num_classes_; }

  std::span<const double> logits() const { return logits_; }
  std::span<const double> row(std::size_t i) const;
  std::span<const int> labels() const { return labels_; }
  int label(std::size_t i) const { return labels_[i]; }

  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;

 private:
  std::vector<double> logits_;
  std::vector<int> labels_;
  int num_classes_;
};

// Row-stochastic N x K probabilities with labels. Rows must be in [0, 1]
// and sum to 1 within kRowSumTolerance.
class ProbabilitySet {
 public:
  static constexpr double kRowSumTolerance = 1e-9;

  ProbabilitySet(std::vector<double> probs, std::vector<int> labels, int num_classes);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  int num_classes() const { return num_classes_; }

  std::span<const double> probs() const { return probs_; }
  std::span<const double> row(std::size_t i) const;
  std::span<const int> labels() const { return labels_; }
  int label(std::size_t i) const { return labels_[i]; }

 private:
  std::vector<double> probs_;
  std::vector<int> labels_;
  int num_classes_;
};

struct BinningConfig {
  int bins = 15;

  // Throws ValidationError when bins < 1.
  void Validate() const;
  friend bool operator==(const BinningConfig&, const BinningConfig&) = default;
};

// Top-1 view of a probability set.
struct Top1Result {
  std::vector<double> confidence;
  std::vector<int> predicted;
  std::vector<std::uint8_t> correct;
};

// Confidence/correctness pairs plus true labels: the input of every binned
// metric. Built from a ProbabilitySet via Top1, or directly from scores when
// the correctness pattern is given (hand fixtures, K = 1 collapse checks).
class ScoredSet {
 public:
  ScoredSet(std::vector<double> confidence, std::vector<std::uint8_t> correct,
            std::vector<int> labels, int num_classes);

  static ScoredSet FromProbabilities(const ProbabilitySet& probs);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  int num_classes() const { return num_classes_; }

  std::span<const double> confidence() const { return confidence_; }
  std::span<const std::uint8_t> correct() const { return correct_; }
  std::span<const int> labels() const { return labels_; }

  double Accuracy() const;
  double MeanConfidence() const;

 private:
  std::vector<double> confidence_;
  std::vector<std::uint8_t> correct_;
  std::vector<int> labels_;
  int num_classes_;
};

struct Bin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  // Zero when count == 0; callers must check empty() before using them.
  double mean_confidence = 0.0;
  double mean_accuracy = 0.0;

  bool empty() const { return count == 0; }
};

struct BinStats {
  std::vector<Bin> bins;
  std::size_t num_samples = 0;
};

// Numerically stable row softmax (shift by row max).
ProbabilitySet Softmax(const PredictionSet& pred);

// Max probability, argmax (lowest index wins ties) and correctness per row.
Top1Result Top1(const ProbabilitySet& probs);

// 1-based bin index of a confidence in [0, 1]. Bin m owns ((m-1)/M, m/M];
// a confidence of exactly 0 belongs to bin 1.
int BinAssign(double confidence, const BinningConfig& cfg);

BinStats ComputeBinStats(const ScoredSet& scored, const BinningConfig& cfg);
BinStats ComputeBinStats(const ProbabilitySet& probs, const BinningConfig& cfg);

// Rows whose true label is `k`, in their original order.
PredictionSet ClassSubset(const PredictionSet& pred, int k);
ProbabilitySet ClassSubset(const ProbabilitySet& probs, int k);
ScoredSet ClassSubset(const ScoredSet& scored, int k);

// Per-row Shannon entropy in nats, with 0 ln 0 = 0.
std::vector<double> Entropy(const ProbabilitySet& probs);

// Sample count per true label.
std::vector<std::size_t> ClassSizes(std::span<const int> labels, int num_classes);

}  // namespace mcscal

#endif  // MCSCAL_DATASET_H_
