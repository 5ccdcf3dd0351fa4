// Copyright 2026 The starconsensus Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "starconsensus/eig_sym.h"
#include "starconsensus/numopt.h"
#include "starconsensus/simulation.h"
#include "starconsensus/spectral.h"
#include "starconsensus/theta_solver.h"
#include "starconsensus/weights.h"

namespace starconsensus {
namespace {

// Branch lengths 1..B with two branches each.
BranchSpec LadderSpec(int types) {
  BranchSpec spec;
  for (int p = 1; p <= types; ++p) {
    spec.lengths.push_back(p);
    spec.counts.push_back(2);
  }
  return spec;
}

void BM_SolveTheta(benchmark::State& state) {
  const BranchSpec spec = LadderSpec(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(SolveTheta(spec));
}
BENCHMARK(BM_SolveTheta)->Arg(3)->Arg(10)->Arg(30);

void BM_KMax(benchmark::State& state) {
  const BranchSpec spec{{5, 4, 3}, {3, 2, 1}, 1};
  for (auto _ : state) benchmark::DoNotOptimize(KMax(spec));
}
BENCHMARK(BM_KMax);

void BM_EigSym(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = normal(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(EigSym(a));
}
BENCHMARK(BM_EigSym)->Arg(20)->Arg(60)->Arg(120);

void BM_OptimizeWeights(benchmark::State& state) {
  const StarNetwork net =
      StarNetwork::Build({{1, 2, 3}, {4, 3, 2}, 1}).value();
  const StratifiedWeights init = DefaultInitialWeights(net);
  for (auto _ : state) {
    benchmark::DoNotOptimize(OptimizeWeights(net, init, 1e-6));
  }
}
BENCHMARK(BM_OptimizeWeights)->Unit(benchmark::kMillisecond);

void BM_RunTrials(benchmark::State& state) {
  const StarNetwork net =
      StarNetwork::Build({{1, 2, 3}, {4, 3, 2}, 1}).value();
  const WeightMatrix w =
      AssembleWeightMatrix(net, OptimalWeights(net.spec()).value()).value();
  const SimulationConfig config{.trials = static_cast<int>(state.range(0)),
                                .iterations = 500};
  for (auto _ : state) benchmark::DoNotOptimize(RunTrials(w, config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunTrials)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace starconsensus

BENCHMARK_MAIN();
