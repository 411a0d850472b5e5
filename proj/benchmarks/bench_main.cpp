// Copyright 2026 The sagdiv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Micro benchmarks for the hot paths: Gram matrices, the gradient loop and
// batch evaluation of a fitted model.

#include <map>
#include <random>

#include <benchmark/benchmark.h>

#include "sagdiv/kernel.hpp"
#include "sagdiv/models.hpp"
#include "sagdiv/sagd.hpp"
#include "sagdiv/scenarios.hpp"

namespace sagdiv {
namespace {

Matrix gaussian(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

void BM_Gram(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix a = gaussian(n, 2, 1);
  const Matrix b = gaussian(n, 2, 2);
  const KernelSpec spec(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gram(spec, a, b));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Gram)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

struct Fitted {
  GeneratedData data;
  PreliminaryEstimators estimators;
  KernelSAGDOptions options;
};

// Estimators are fitted once per stream length; only the loop is timed.
const Fitted& fitted(Index stream) {
  static std::map<Index, Fitted> cache;
  if (auto it = cache.find(stream); it != cache.end()) return it->second;
  ScenarioSpec spec;
  spec.response = Response::Sin;
  spec.sizes = SampleSizes{600, stream, 10, 10, 10, 10};
  spec.seed = 7;
  auto data = gen_continuous(spec);
  auto options = kernel_sagd_options(MethodSettings{}, LossSpec::quadratic(), stream, false, FitSeeds{3});
  auto estimators = fit_preliminary_estimators(data.estimator_data, options);
  return cache.emplace(stream, Fitted{std::move(data), std::move(estimators), options}).first->second;
}

void BM_GradientLoop(benchmark::State& state) {
  const auto& f = fitted(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fit_sagdiv(f.estimators, f.data.z_stream, f.options.sagd));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GradientLoop)->Arg(300)->Arg(1200)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  const auto& f = fitted(1200);
  const SAGDModel model = fit_sagdiv(f.estimators, f.data.z_stream, f.options.sagd);
  const Matrix x = gaussian(state.range(0), 1, 5);
  for (auto _ : state) benchmark::DoNotOptimize(eval_sagd(model, x, static_cast<int>(state.range(1))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Evaluate)->Args({1000, 1})->Args({1000, 2})->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace sagdiv

BENCHMARK_MAIN();
