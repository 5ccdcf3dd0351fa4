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

#include <gtest/gtest.h>

#include <cmath>

#include "starconsensus/weights.h"

namespace starconsensus {
namespace {

WeightMatrix MustMatrix(const BranchSpec& spec, Scheme scheme) {
  absl::StatusOr<StarNetwork> net = StarNetwork::Build(spec);
  EXPECT_TRUE(net.ok());
  absl::StatusOr<StratifiedWeights> w = WeightsForScheme(*net, scheme);
  EXPECT_TRUE(w.ok());
  absl::StatusOr<WeightMatrix> m = AssembleWeightMatrix(*net, *w);
  EXPECT_TRUE(m.ok());
  return *std::move(m);
}

const BranchSpec kMixedStar{{1, 2, 3}, {4, 3, 2}, 1};

TEST(ConsensusStepTest, PreservesAverage) {
  for (Scheme scheme : kFormulaSchemes) {
    const WeightMatrix w = MustMatrix(kMixedStar, scheme);
    Eigen::VectorXd x = InitialState(w.size(), 5, 0);
    const double mean0 = x.mean();
    for (int t = 0; t < 2000; ++t) {
      absl::StatusOr<Eigen::VectorXd> next = ConsensusStep(w, x);
      ASSERT_TRUE(next.ok());
      x = *next;
      ASSERT_LE(std::abs(x.mean() - mean0), 1e-10) << SchemeName(scheme);
    }
    EXPECT_LE((x.array() - mean0).abs().maxCoeff(), 1e-6);
  }
}

TEST(ConsensusStepTest, DimensionMismatch) {
  const WeightMatrix w = MustMatrix({{1}, {2}, 1}, Scheme::kOptimal);
  EXPECT_FALSE(ConsensusStep(w, Eigen::VectorXd::Zero(4)).ok());
}

TEST(InitialStateTest, DeterministicPerTrial) {
  EXPECT_EQ(InitialState(10, 3, 7), InitialState(10, 3, 7));
  EXPECT_NE(InitialState(10, 3, 7), InitialState(10, 3, 8));
  EXPECT_NE(InitialState(10, 3, 7), InitialState(10, 4, 7));
  EXPECT_NE(InitialState(10, 3, 7, 0), InitialState(10, 3, 7, 1));
  const Eigen::VectorXd x = InitialState(1000, 1, 1);
  EXPECT_GE(x.minCoeff(), 0.0);
  EXPECT_LT(x.maxCoeff(), 1.0);
  EXPECT_NEAR(x.mean(), 0.5, 0.05);
}

TEST(RunTrialsTest, ZeroIterations) {
  const WeightMatrix w = MustMatrix(kMixedStar, Scheme::kMetropolis);
  absl::StatusOr<ConvergenceTrace> t = RunTrials(w, {.trials = 10, .iterations = 0});
  ASSERT_TRUE(t.ok());
  EXPECT_EQ(t->mean_error, std::vector<double>{1.0});
}

TEST(RunTrialsTest, RejectsBadConfig) {
  const WeightMatrix w = MustMatrix(kMixedStar, Scheme::kMetropolis);
  EXPECT_FALSE(RunTrials(w, {.trials = 0}).ok());
  EXPECT_FALSE(RunTrials(w, {.trials = 1, .iterations = -1}).ok());
}

TEST(RunTrialsTest, WarnsWhenNotConvergent) {
  const int n = 4;
  absl::StatusOr<WeightMatrix> w =
      WeightMatrix::FromDense(Eigen::MatrixXd::Identity(n, n));
  ASSERT_TRUE(w.ok());
  absl::StatusOr<ConvergenceTrace> t =
      RunTrials(*w, {.trials = 3, .iterations = 5});
  ASSERT_TRUE(t.ok());
  EXPECT_FALSE(t->warning.empty());
  for (double e : t->mean_error) EXPECT_NEAR(e, 1.0, 1e-12);
}

TEST(RunTrialsTest, BitIdenticalAcrossRunsAndThreads) {
  const WeightMatrix w = MustMatrix(kMixedStar, Scheme::kOptimal);
  SimulationConfig config{.trials = 300, .iterations = 50, .seed = 9};
  absl::StatusOr<ConvergenceTrace> a = RunTrials(w, config);
  absl::StatusOr<ConvergenceTrace> b = RunTrials(w, config);
  config.threads = 3;
  absl::StatusOr<ConvergenceTrace> c = RunTrials(w, config);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ(a->mean_error, b->mean_error);
  EXPECT_EQ(a->mean_error, c->mean_error);
  config.seed = 10;
  absl::StatusOr<ConvergenceTrace> d = RunTrials(w, config);
  EXPECT_NE(a->mean_error, d->mean_error);
}

TEST(RunTrialsTest, PerTrialTracesAverageToMean) {
  const WeightMatrix w = MustMatrix(kMixedStar, Scheme::kMaxDegree);
  absl::StatusOr<ConvergenceTrace> t = RunTrials(
      w, {.trials = 70, .iterations = 20, .seed = 2, .keep_per_trial = true});
  ASSERT_TRUE(t.ok());
  ASSERT_EQ(t->per_trial.size(), 70u);
  for (int step = 0; step <= 20; ++step) {
    double sum = 0;
    for (const auto& row : t->per_trial) sum += row[step];
    EXPECT_NEAR(sum / 70, t->mean_error[step], 1e-14);
    if (step > 0) {
      EXPECT_DOUBLE_EQ(t->decay_ratio[step],
                       t->mean_error[step] / t->mean_error[step - 1]);
    }
  }
}

// log e(t) decays with slope log(SLEM).
TEST(RunTrialsTest, RateLaw) {
  for (Scheme scheme : kFormulaSchemes) {
    const WeightMatrix w = MustMatrix(kMixedStar, scheme);
    absl::StatusOr<double> slem = Slem(w);
    ASSERT_TRUE(slem.ok());
    absl::StatusOr<ConvergenceTrace> t =
        RunTrials(w, {.trials = 200, .iterations = 500, .seed = 4});
    ASSERT_TRUE(t.ok());
    const double slope = FitTailLogSlope(t->mean_error);
    const double expected = std::log(*slem);
    EXPECT_LE(std::abs(slope - expected), 0.02 * std::abs(expected))
        << SchemeName(scheme) << " slope " << slope << " vs " << expected;
  }
}

TEST(FitLogSlopeTest, ExactGeometric) {
  std::vector<double> trace;
  for (int t = 0; t < 30; ++t) trace.push_back(3.0 * std::pow(0.9, t));
  EXPECT_NEAR(FitLogSlope(trace, 0, 30), std::log(0.9), 1e-13);
  EXPECT_NEAR(FitTailLogSlope(trace), std::log(0.9), 1e-13);
  EXPECT_TRUE(std::isnan(FitLogSlope(trace, 3, 4)));
}

}  // namespace
}  // namespace starconsensus
