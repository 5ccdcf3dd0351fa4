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

#include "starconsensus/simulation.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace starconsensus {
namespace {

constexpr int kTrialsPerBlock = 64;
constexpr double kDegenerateSpread = 1e-12;

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Runs one trial, writing e(t) for t = 0..iterations into `out`.
void RunTrial(const Eigen::MatrixXd& w, const SimulationConfig& config,
              uint64_t trial, double* out) {
  const int n = static_cast<int>(w.rows());
  Eigen::VectorXd y;
  double norm0 = 0.0;
  for (int redraw = 0;; ++redraw) {
    y = InitialState(n, config.seed, trial, redraw);
    y.array() -= y.mean();
    norm0 = y.norm();
    if (norm0 >= kDegenerateSpread) break;
  }
  out[0] = 1.0;
  Eigen::VectorXd next(n);
  for (int t = 1; t <= config.iterations; ++t) {
    next.noalias() = w * y;
    next.array() -= next.mean();
    y.swap(next);
    out[t] = y.norm() / norm0;
  }
}

// Pairwise combination of block sums in a fixed tree, so the result is
// independent of how blocks were scheduled.
std::vector<double> PairwiseSum(std::vector<std::vector<double>> blocks) {
  while (blocks.size() > 1) {
    std::vector<std::vector<double>> next;
    for (size_t i = 0; i + 1 < blocks.size(); i += 2) {
      std::vector<double> merged = std::move(blocks[i]);
      for (size_t k = 0; k < merged.size(); ++k) merged[k] += blocks[i + 1][k];
      next.push_back(std::move(merged));
    }
    if (blocks.size() % 2 == 1) next.push_back(std::move(blocks.back()));
    blocks = std::move(next);
  }
  return std::move(blocks.front());
}

}  // namespace

absl::StatusOr<Eigen::VectorXd> ConsensusStep(const WeightMatrix& matrix,
                                              const Eigen::VectorXd& state) {
  if (state.size() != matrix.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("state has ", state.size(), " entries, matrix is ",
                     matrix.size(), "x", matrix.size()));
  }
  return Eigen::VectorXd(matrix.matrix() * state);
}

uint64_t TrialSeed(uint64_t seed, uint64_t trial) {
  return SplitMix64(seed ^ trial);
}

Eigen::VectorXd InitialState(int size, uint64_t seed, uint64_t trial,
                             int redraw) {
  std::mt19937_64 engine(TrialSeed(seed, trial));
  // Redraws continue the same stream past the earlier attempts.
  engine.discard(static_cast<unsigned long long>(redraw) * size);
  Eigen::VectorXd x(size);
  for (int i = 0; i < size; ++i) {
    x[i] = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  }
  return x;
}

absl::StatusOr<ConvergenceTrace> RunTrials(const WeightMatrix& matrix,
                                           const SimulationConfig& config) {
  if (config.trials < 1) {
    return absl::InvalidArgumentError("trials must be >= 1");
  }
  if (config.iterations < 0) {
    return absl::InvalidArgumentError("iterations must be >= 0");
  }
  if (matrix.size() < 2) {
    return absl::InvalidArgumentError("need at least two nodes");
  }
  ConvergenceTrace trace;
  absl::StatusOr<double> slem = Slem(matrix);
  if (!slem.ok()) return slem.status();
  if (!(*slem < 1.0)) {
    trace.warning =
        absl::StrCat("SLEM = ", *slem, " >= 1; the iteration does not converge");
  }

  const int length = config.iterations + 1;
  const int blocks = (config.trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<std::vector<double>> block_sums(blocks,
                                              std::vector<double>(length, 0.0));
  if (config.keep_per_trial) trace.per_trial.assign(config.trials, {});

  auto run_block = [&](int b) {
    std::vector<double> row(length);
    const int first = b * kTrialsPerBlock;
    const int last = std::min(config.trials, first + kTrialsPerBlock);
    for (int trial = first; trial < last; ++trial) {
      RunTrial(matrix.matrix(), config, static_cast<uint64_t>(trial),
               row.data());
      for (int t = 0; t < length; ++t) block_sums[b][t] += row[t];
      if (config.keep_per_trial) trace.per_trial[trial] = row;
    }
  };

  const int threads = std::clamp(config.threads, 1, blocks);
  if (threads == 1) {
    for (int b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (int worker = 0; worker < threads; ++worker) {
      pool.emplace_back([&, worker] {
        for (int b = worker; b < blocks; b += threads) run_block(b);
      });
    }
    for (std::thread& thread : pool) thread.join();
  }

  trace.mean_error = PairwiseSum(std::move(block_sums));
  for (double& e : trace.mean_error) e /= config.trials;
  trace.decay_ratio.assign(length, 1.0);
  for (int t = 1; t < length; ++t) {
    trace.decay_ratio[t] = trace.mean_error[t] / trace.mean_error[t - 1];
  }
  return trace;
}

double FitLogSlope(const std::vector<double>& trace, int begin, int end) {
  const int count = end - begin;
  if (count < 2) return std::nan("");
  double mean_t = 0.0;
  double mean_y = 0.0;
  for (int t = begin; t < end; ++t) {
    mean_t += t;
    mean_y += std::log(trace[t]);
  }
  mean_t /= count;
  mean_y /= count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (int t = begin; t < end; ++t) {
    sxy += (t - mean_t) * (std::log(trace[t]) - mean_y);
    sxx += (t - mean_t) * (t - mean_t);
  }
  return sxy / sxx;
}

double FitTailLogSlope(const std::vector<double>& trace) {
  const int size = static_cast<int>(trace.size());
  return FitLogSlope(trace, size - size / 3, size);
}

}  // namespace starconsensus
