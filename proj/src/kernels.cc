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

#include "mcscal/kernels.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mcscal {
namespace kernels {
namespace {

// Minimum number of matrix entries for a parallel region.
constexpr std::ptrdiff_t kParallelThreshold = 1 << 14;

inline void SoftmaxRow(const double* z, int k, std::span<const double> temps, double* out) {
  for (int c = 0; c < k; ++c) {
    const double t = temps.empty() ? 1.0 : (temps.size() == 1 ? temps[0] : temps[c]);
    out[c] = z[c] / t;
  }
  double max_value = out[0];
  for (int c = 1; c < k; ++c) max_value = std::max(max_value, out[c]);
  double sum = 0.0;
  for (int c = 0; c < k; ++c) {
    out[c] = std::exp(out[c] - max_value);
    sum += out[c];
  }
  for (int c = 0; c < k; ++c) out[c] /= sum;
}

inline void Top1Row(const double* p, int k, int label, double& confidence, int& predicted,
                    std::uint8_t& correct) {
  int best = 0;
  for (int c = 1; c < k; ++c) {
    if (p[c] > p[best]) best = c;
  }
  confidence = p[best];
  predicted = best;
  correct = best == label ? 1 : 0;
}

inline double EntropyRow(const double* p, int k) {
  double h = 0.0;
  for (int c = 0; c < k; ++c) {
    if (p[c] > 0.0) h -= p[c] * std::log(p[c]);
  }
  return h;
}

inline double NegLogRow(const double* p, int label, double floor) {
  return -std::log(std::max(p[label], floor));
}

std::ptrdiff_t Rows(std::span<const double> matrix, int k) {
  assert(k > 0 && matrix.size() % static_cast<std::size_t>(k) == 0);
  return static_cast<std::ptrdiff_t>(matrix.size() / static_cast<std::size_t>(k));
}

}  // namespace

namespace serial {

void ScaledSoftmax(std::span<const double> logits, int num_classes,
                   std::span<const double> temperatures, std::span<double> out) {
  const std::ptrdiff_t n = Rows(logits, num_classes);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    SoftmaxRow(logits.data() + i * num_classes, num_classes, temperatures,
               out.data() + i * num_classes);
  }
}

void Top1(std::span<const double> probs, int num_classes, std::span<const int> labels,
          std::span<double> confidence, std::span<int> predicted,
          std::span<std::uint8_t> correct) {
  const std::ptrdiff_t n = Rows(probs, num_classes);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    Top1Row(probs.data() + i * num_classes, num_classes, labels[i], confidence[i],
            predicted[i], correct[i]);
  }
}

void Entropy(std::span<const double> probs, int num_classes, std::span<double> out) {
  const std::ptrdiff_t n = Rows(probs, num_classes);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = EntropyRow(probs.data() + i * num_classes, num_classes);
  }
}

void TrueClassNegLog(std::span<const double> probs, int num_classes,
                     std::span<const int> labels, double floor, std::span<double> out) {
  const std::ptrdiff_t n = Rows(probs, num_classes);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = NegLogRow(probs.data() + i * num_classes, labels[i], floor);
  }
}

}  // namespace serial

namespace parallel {

void ScaledSoftmax(std::span<const double> logits, int num_classes,
                   std::span<const double> temperatures, std::span<double> out) {
  const std::ptrdiff_t n = Rows(logits, num_classes);
  const bool go_parallel = static_cast<std::ptrdiff_t>(logits.size()) >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (go_parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    SoftmaxRow(logits.data() + i * num_classes, num_classes, temperatures,
               out.data() + i * num_classes);
  }
}

void Top1(std::span<const double> probs, int num_classes, std::span<const int> labels,
          std::span<double> confidence, std::span<int> predicted,
          std::span<std::uint8_t> correct) {
  const std::ptrdiff_t n = Rows(probs, num_classes);
  const bool go_parallel = static_cast<std::ptrdiff_t>(probs.size()) >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (go_parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    Top1Row(probs.data() + i * num_classes, num_classes, labels[i], confidence[i],
            predicted[i], correct[i]);
  }
}

void Entropy(std::span<const double> probs, int num_classes, std::span<double> out) {
  const std::ptrdiff_t n = Rows(probs, num_classes);
  const bool go_parallel = static_cast<std::ptrdiff_t>(probs.size()) >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (go_parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = EntropyRow(probs.data() + i * num_classes, num_classes);
  }
}

void TrueClassNegLog(std::span<const double> probs, int num_classes,
                     std::span<const int> labels, double floor, std::span<double> out) {
  const std::ptrdiff_t n = Rows(probs, num_classes);
  const bool go_parallel = static_cast<std::ptrdiff_t>(probs.size()) >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (go_parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = NegLogRow(probs.data() + i * num_classes, labels[i], floor);
  }
}

}  // namespace parallel

void ScaledSoftmax(Execution exec, std::span<const double> logits, int num_classes,
                   std::span<const double> temperatures, std::span<double> out) {
  if (exec == Execution::kParallel) {
    parallel::ScaledSoftmax(logits, num_classes, temperatures, out);
  } else {
    serial::ScaledSoftmax(logits, num_classes, temperatures, out);
  }
}

void Top1(Execution exec, std::span<const double> probs, int num_classes,
          std::span<const int> labels, std::span<double> confidence,
          std::span<int> predicted, std::span<std::uint8_t> correct) {
  if (exec == Execution::kParallel) {
    parallel::Top1(probs, num_classes, labels, confidence, predicted, correct);
  } else {
    serial::Top1(probs, num_classes, labels, confidence, predicted, correct);
  }
}

double SumAscending(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

int MaxThreads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace kernels
}  // namespace mcscal
