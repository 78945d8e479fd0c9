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

// Serial reference kernels against their OpenMP counterparts.

#include <cstdint>
#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "mcscal/calibrate.h"
#include "mcscal/kernels.h"
#include "testing/synthetic.h"

namespace mcscal {
namespace {

constexpr int kClasses = 100;

const PredictionSet& Logits() {
  static const PredictionSet pred = [] {
    std::mt19937_64 rng(1);
    return testing::RandomLogits(rng, 1 << 16, kClasses);
  }();
  return pred;
}

template <Execution exec>
void BM_ScaledSoftmax(benchmark::State& state) {
  const PredictionSet& pred = Logits();
  std::vector<double> out(pred.logits().size());
  const double t[] = {1.5};
  for (auto _ : state) {
    kernels::ScaledSoftmax(exec, pred.logits(), kClasses, t, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * pred.size());
}
BENCHMARK(BM_ScaledSoftmax<Execution::kSerial>)->Name("ScaledSoftmax/serial");
BENCHMARK(BM_ScaledSoftmax<Execution::kParallel>)->Name("ScaledSoftmax/parallel");

template <Execution exec>
void BM_Top1(benchmark::State& state) {
  const PredictionSet& pred = Logits();
  std::vector<double> probs(pred.logits().size());
  kernels::serial::ScaledSoftmax(pred.logits(), kClasses, {}, probs);
  std::vector<double> conf(pred.size());
  std::vector<int> predicted(pred.size());
  std::vector<std::uint8_t> correct(pred.size());
  for (auto _ : state) {
    kernels::Top1(exec, probs, kClasses, pred.labels(), conf, predicted, correct);
    benchmark::DoNotOptimize(conf.data());
  }
  state.SetItemsProcessed(state.iterations() * pred.size());
}
BENCHMARK(BM_Top1<Execution::kSerial>)->Name("Top1/serial");
BENCHMARK(BM_Top1<Execution::kParallel>)->Name("Top1/parallel");

void BM_EntropySerial(benchmark::State& state) {
  const PredictionSet& pred = Logits();
  std::vector<double> probs(pred.logits().size());
  kernels::serial::ScaledSoftmax(pred.logits(), kClasses, {}, probs);
  std::vector<double> out(pred.size());
  for (auto _ : state) {
    kernels::serial::Entropy(probs, kClasses, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * pred.size());
}
BENCHMARK(BM_EntropySerial)->Name("Entropy/serial");

void BM_EntropyParallel(benchmark::State& state) {
  const PredictionSet& pred = Logits();
  std::vector<double> probs(pred.logits().size());
  kernels::serial::ScaledSoftmax(pred.logits(), kClasses, {}, probs);
  std::vector<double> out(pred.size());
  for (auto _ : state) {
    kernels::parallel::Entropy(probs, kClasses, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * pred.size());
}
BENCHMARK(BM_EntropyParallel)->Name("Entropy/parallel");

template <Execution exec>
void BM_GammaGrid(benchmark::State& state) {
  const PredictionSet val = testing::HeterogeneousFixture(1, 5000);
  FitConfig cfg;
  const std::vector<double> cwmcs = FittingCwmcs(val, 1.3, cfg);
  const std::vector<double> grid = GammaGrid(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(EvaluateGammaGrid(val, 1.3, cwmcs, grid, cfg, exec));
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_GammaGrid<Execution::kSerial>)->Name("GammaGrid/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GammaGrid<Execution::kParallel>)->Name("GammaGrid/parallel")->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace mcscal

BENCHMARK_MAIN();
