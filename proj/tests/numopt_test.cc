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

#include "starconsensus/numopt.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "starconsensus/theta_solver.h"
#include "support/oracles.h"

namespace starconsensus {
namespace {

using ::starconsensus::testing::RandomSpec;

StarNetwork MustBuild(const BranchSpec& spec) {
  absl::StatusOr<StarNetwork> net = StarNetwork::Build(spec);
  EXPECT_TRUE(net.ok()) << net.status();
  return *std::move(net);
}

std::vector<double> RandomPoint(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(0.05, 0.6);
  std::vector<double> x(dim);
  for (double& v : x) v = u(rng);
  return x;
}

TEST(SlemObjectiveTest, MatrixMatchesReference) {
  const BranchSpec spec{{1, 3}, {3, 2}, 2};
  const StarNetwork net = MustBuild(spec);
  const SlemObjective objective(net);
  ASSERT_EQ(objective.dimension(), 4);
  const std::vector<double> x = {0.1, 0.2, 0.3, 0.4};
  const auto ref = testing::BuildReferenceGraph(spec.lengths, spec.counts, 2);
  const Eigen::MatrixXd ref_w = testing::ReferenceWeightMatrix(
      ref, [&](int p, int depth, int, int) {
        return x[p == 0 ? 0 : depth];
      });
  const Eigen::VectorXd a = testing::SortedEigenvalues(objective.Matrix(x));
  const Eigen::VectorXd b = testing::SortedEigenvalues(ref_w);
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_NEAR(objective.Value(x), testing::ReferenceSlem(ref_w), 1e-13);
}

// The eigenvector formula predicts the directional derivative of lambda_2
// and of -lambda_N to first order.
TEST(SlemObjectivePropertyTest, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> normal;
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    testing::SpecSample sample = RandomSpec(rng, 1, 4, 5, 1, 4);
    const StarNetwork net = MustBuild({sample.m, sample.n, 1 + trial % 2});
    const SlemObjective objective(net);
    const std::vector<double> x = RandomPoint(rng, objective.dimension());
    const ObjectiveValue at = objective.Evaluate(x);

    const Eigen::VectorXd eig =
        testing::SortedEigenvalues(objective.Matrix(x));
    const int n = static_cast<int>(eig.size());
    // Skip iterates where either eigenvalue is not simple.
    if (eig[1] - eig[2] < 1e-3 || eig[n - 2] - eig[n - 1] < 1e-3) continue;

    std::vector<double> dir(x.size());
    for (double& d : dir) d = normal(rng);
    const double h = 1e-6;
    std::vector<double> plus = x;
    std::vector<double> minus = x;
    for (size_t s = 0; s < x.size(); ++s) {
      plus[s] += h * dir[s];
      minus[s] -= h * dir[s];
    }
    const ObjectiveValue vp = objective.Evaluate(plus);
    const ObjectiveValue vm = objective.Evaluate(minus);
    double pred2 = 0;
    double pred_min = 0;
    for (size_t s = 0; s < x.size(); ++s) {
      pred2 += at.grad_lambda2[s] * dir[s];
      pred_min += at.grad_neg_lambda_min[s] * dir[s];
    }
    const double fd2 = (vp.lambda2 - vm.lambda2) / (2 * h);
    const double fd_min = -(vp.lambda_min - vm.lambda_min) / (2 * h);
    EXPECT_LE(std::abs(fd2 - pred2), 1e-3 * std::max(1e-3, std::abs(pred2)));
    EXPECT_LE(std::abs(fd_min - pred_min),
              1e-3 * std::max(1e-3, std::abs(pred_min)));
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(SlemObjectivePropertyTest, SmoothedGradientAndBound) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    testing::SpecSample sample = RandomSpec(rng, 1, 3, 4, 1, 3);
    const StarNetwork net = MustBuild({sample.m, sample.n, 1});
    const SlemObjective objective(net);
    const std::vector<double> x = RandomPoint(rng, objective.dimension());
    const double mu = 1e-2;
    std::vector<double> grad;
    const double f = objective.Smoothed(x, mu, &grad);
    // Log-sum-exp overestimates the largest modulus by at most mu log(2N).
    const double exact = objective.Value(x);
    EXPECT_GE(f, exact - 1e-12);
    EXPECT_LE(f, std::max(exact, 1.0) + mu * std::log(2.0 * net.node_count()));
    for (size_t s = 0; s < x.size(); ++s) {
      std::vector<double> p = x;
      std::vector<double> m = x;
      p[s] += 1e-6;
      m[s] -= 1e-6;
      const double fd = (objective.Smoothed(p, mu, nullptr) -
                         objective.Smoothed(m, mu, nullptr)) /
                        2e-6;
      EXPECT_NEAR(grad[s], fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(OptimizeWeightsTest, RejectsBadArguments) {
  const StarNetwork net = MustBuild({{1, 2}, {2, 2}, 1});
  const StratifiedWeights init = DefaultInitialWeights(net);
  EXPECT_FALSE(OptimizeWeights(net, init, 0.0).ok());
  StratifiedWeights short_init = init;
  short_init.by_stratum.pop_back();
  EXPECT_FALSE(OptimizeWeights(net, short_init, 1e-6).ok());
  StratifiedWeights out_of_range = init;
  out_of_range.by_stratum[0][0] = 1.5;
  EXPECT_EQ(OptimizeWeights(net, out_of_range, 1e-6).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(OptimizeWeightsTest, ReportsBestIterate) {
  const StarNetwork net = MustBuild({{1, 2, 3}, {2, 3, 2}, 1});
  OptimizerOptions options;
  options.subgradient_iterations = 300;
  options.record_history = true;
  absl::StatusOr<OptimizationResult> r =
      OptimizeWeights(net, DefaultInitialWeights(net), 1e-6, options);
  ASSERT_TRUE(r.ok()) << r.status();
  ASSERT_FALSE(r->best_history.empty());
  for (size_t i = 1; i < r->best_history.size(); ++i) {
    EXPECT_LE(r->best_history[i], r->best_history[i - 1]);
  }
  EXPECT_EQ(r->slem, r->best_history.back());
  EXPECT_EQ(r->slem, *std::min_element(r->best_history.begin(),
                                       r->best_history.end()));
  const SlemObjective objective(net);
  EXPECT_EQ(objective.Value(r->weights.Flatten()), r->slem);
}

// Numeric optimum agrees with the closed form (every n_p >= 2).
TEST(OptimizeWeightsTest, MatchesClosedForm) {
  const std::vector<BranchSpec> specs = {
      {{1}, {2}, 1}, {{1, 2, 3}, {4, 3, 2}, 1}, {{2, 3}, {2, 3}, 2},
      {{1, 3}, {3, 2}, 3}};
  for (const BranchSpec& spec : specs) {
    const StarNetwork net = MustBuild(spec);
    absl::StatusOr<OptimizationResult> r =
        OptimizeWeights(net, DefaultInitialWeights(net), 1e-6);
    ASSERT_TRUE(r.ok()) << r.status();
    absl::StatusOr<ThetaSolution> s = SolveTheta(spec);
    ASSERT_TRUE(s.ok());
    absl::StatusOr<StratifiedWeights> closed = OptimalWeights(spec, *s);
    ASSERT_TRUE(closed.ok());
    EXPECT_NEAR(r->slem, s->slem, 1e-3) << spec.DebugString();
    const std::vector<double> a = r->weights.Flatten();
    const std::vector<double> b = closed->Flatten();
    for (size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(a[i], b[i], 5e-3) << spec.DebugString() << " stratum " << i;
    }
  }
}

}  // namespace
}  // namespace starconsensus
