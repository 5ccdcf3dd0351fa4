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

// Monte Carlo runs of the consensus iteration x(t + 1) = W x(t).

#ifndef STARCONSENSUS_SIMULATION_H_
#define STARCONSENSUS_SIMULATION_H_

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "starconsensus/spectral.h"

namespace starconsensus {

struct SimulationConfig {
  int trials = 10000;
  int iterations = 500;
  uint64_t seed = 0;
  // Worker threads. The trace does not depend on this value.
  int threads = 1;
  bool keep_per_trial = false;
};

struct ConvergenceTrace {
  // mean_error[t] = mean over trials of ||x(t) - xbar 1|| / ||x(0) - xbar 1||.
  std::vector<double> mean_error;
  // decay_ratio[t] = mean_error[t] / mean_error[t - 1]; decay_ratio[0] = 1.
  std::vector<double> decay_ratio;
  // Filled when SimulationConfig::keep_per_trial is set.
  std::vector<std::vector<double>> per_trial;
  // Non-empty when the matrix does not satisfy SLEM < 1.
  std::string warning;
};

// W x. Fails on a dimension mismatch.
absl::StatusOr<Eigen::VectorXd> ConsensusStep(const WeightMatrix& matrix,
                                              const Eigen::VectorXd& state);

// Seed of the generator for one trial: splitmix64(seed ^ trial). Trials are
// independent streams, so results do not depend on execution order.
uint64_t TrialSeed(uint64_t seed, uint64_t trial);

// I.i.d. uniform [0, 1) initial values for one trial (53-bit doubles from a
// mt19937_64 seeded with TrialSeed). `redraw` selects the redraw attempt for
// degenerate states.
Eigen::VectorXd InitialState(int size, uint64_t seed, uint64_t trial,
                             int redraw = 0);

// Mean normalized-error trace over `config.trials` random initial states.
// The iteration runs on the disagreement vector x(t) - xbar 1 and removes
// its mean after each step; in exact arithmetic that mean is zero and this
// keeps rounding along the all-ones direction from flooring the error.
absl::StatusOr<ConvergenceTrace> RunTrials(const WeightMatrix& matrix,
                                           const SimulationConfig& config);

// Least-squares slope of log(trace[t]) over t in [begin, end).
double FitLogSlope(const std::vector<double>& trace, int begin, int end);

// Slope fitted over the last third of the trace.
double FitTailLogSlope(const std::vector<double>& trace);

}  // namespace starconsensus

#endif  // STARCONSENSUS_SIMULATION_H_
