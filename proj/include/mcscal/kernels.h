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

#ifndef MCSCAL_KERNELS_H_
#define MCSCAL_KERNELS_H_

// Row-wise numeric kernels over row-major N x K buffers.
//
// Each kernel exists twice: `serial` is the plain reference loop and
// `parallel` distributes rows over OpenMP threads. Rows are independent and
// every per-row computation is written once (see the detail helpers in
// kernels.cc), so both variants produce bitwise-identical output for any
// thread count. Reductions across rows are never done inside these kernels;
// callers sum per-row results in ascending index order.

#include <cstddef>
#include <cstdint>
#include <span>

namespace mcscal {

enum class Execution { kSerial, kParallel };

namespace kernels {

namespace serial {

// Softmax of logits / temperature. `temperatures` is empty (no scaling), a
// single scalar, or K values dividing the matching logit coordinate.
void ScaledSoftmax(std::span<const double> logits, int num_classes,
                   std::span<const double> temperatures, std::span<double> out);
// Max probability and argmax (lowest index on ties) per row.
void Top1(std::span<const double> probs, int num_classes, std::span<const int> labels,
          std::span<double> confidence, std::span<int> predicted,
          std::span<std::uint8_t> correct);
// Entropy in nats.
void Entropy(std::span<const double> probs, int num_classes, std::span<double> out);
// -ln(max(p[label], floor)).
void TrueClassNegLog(std::span<const double> probs, int num_classes,
                     std::span<const int> labels, double floor, std::span<double> out);

}  // namespace serial

namespace parallel {

void ScaledSoftmax(std::span<const double> logits, int num_classes,
                   std::span<const double> temperatures, std::span<double> out);
void Top1(std::span<const double> probs, int num_classes, std::span<const int> labels,
          std::span<double> confidence, std::span<int> predicted,
          std::span<std::uint8_t> correct);
void Entropy(std::span<const double> probs, int num_classes, std::span<double> out);
void TrueClassNegLog(std::span<const double> probs, int num_classes,
                     std::span<const int> labels, double floor, std::span<double> out);

}  // namespace parallel

// Dispatch helpers.
void ScaledSoftmax(Execution exec, std::span<const double> logits, int num_classes,
                   std::span<const double> temperatures, std::span<double> out);
void Top1(Execution exec, std::span<const double> probs, int num_classes,
          std::span<const int> labels, std::span<double> confidence,
          std::span<int> predicted, std::span<std::uint8_t> correct);

// Left-to-right sum.
double SumAscending(std::span<const double> values);

// Threads OpenMP would use for a parallel region (1 without OpenMP).
int MaxThreads();

}  // namespace kernels
}  // namespace mcscal

#endif  // MCSCAL_KERNELS_H_
