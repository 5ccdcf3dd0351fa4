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

#include "starconsensus/blocks.h"

#include <gtest/gtest.h>

#include <random>

#include "starconsensus/spectral.h"
#include "starconsensus/theta_solver.h"
#include "support/oracles.h"

namespace starconsensus {
namespace {

using ::starconsensus::testing::RandomSpec;

StratifiedWeights RandomWeights(std::mt19937_64& rng, const BranchSpec& spec,
                                double hi) {
  std::uniform_real_distribution<double> u(0.01, hi);
  StratifiedWeights w;
  w.scheme = Scheme::kNumeric;
  for (int m : spec.lengths) {
    std::vector<double> type(m);
    for (double& x : type) x = u(rng);
    w.by_stratum.push_back(std::move(type));
  }
  return w;
}

// W_0 written out entry by entry.
Eigen::MatrixXd ReferenceW0(const BranchSpec& spec,
                            const StratifiedWeights& w) {
  int total = 1;
  for (int m : spec.lengths) total += m;
  Eigen::MatrixXd w0 = Eigen::MatrixXd::Zero(total, total);
  w0(0, 0) = 1.0;
  int at = 1;
  for (int p = 0; p < spec.num_types(); ++p) {
    const auto& wp = w.by_stratum[p];
    const int m = spec.lengths[p];
    w0(0, 0) -= spec.counts[p] * wp[0];
    w0(0, at) = w0(at, 0) = std::sqrt(spec.counts[p]) * wp[0];
    for (int i = 0; i < m; ++i) {
      const double below = (i + 1 < m) ? wp[i + 1] : 0.0;
      w0(at + i, at + i) = 1.0 - wp[i] - below;
      if (i + 1 < m) w0(at + i, at + i + 1) = w0(at + i + 1, at + i) = below;
    }
    at += m;
  }
  return w0;
}

BlockDecomposition MustBlocks(const BranchSpec& spec,
                              const StratifiedWeights& w) {
  absl::StatusOr<BlockDecomposition> b = BuildBlocks(spec, w);
  EXPECT_TRUE(b.ok()) << b.status();
  return *std::move(b);
}

TEST(BlocksTest, RejectsMultipleCores) {
  const BranchSpec spec{{1, 2}, {2, 2}, 2};
  std::mt19937_64 rng(1);
  EXPECT_FALSE(BuildBlocks(spec, RandomWeights(rng, spec, 0.3)).ok());
}

TEST(BlocksTest, MatchesReferenceW0) {
  std::mt19937_64 rng(71);
  const BranchSpec spec{{3, 1, 2}, {2, 4, 3}, 1};
  const StratifiedWeights w = RandomWeights(rng, spec, 0.4);
  const BlockDecomposition b = MustBlocks(spec, w);
  EXPECT_LE((b.w0 - ReferenceW0(spec, w)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(b.w0_prime, b.w0.bottomRightCorner(6, 6));
  EXPECT_EQ(b.prefix_lengths, (std::vector<int>{0, 3, 4, 6}));
}

// Full W and eig(W_0) + (n_p - 1) x eig(W_p) have the same spectrum for any
// stratum-constant weights.
TEST(BlocksPropertyTest, SpectrumUnion) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 60; ++trial) {
    testing::SpecSample sample = RandomSpec(rng, 1, 4, 6, 2, 5);
    const BranchSpec spec{sample.m, sample.n, 1};
    const StratifiedWeights w = RandomWeights(rng, spec, 0.9);
    const BlockDecomposition b = MustBlocks(spec, w);
    absl::StatusOr<StarNetwork> net = StarNetwork::Build(spec);
    ASSERT_TRUE(net.ok());
    absl::StatusOr<WeightMatrix> full = AssembleWeightMatrix(*net, w);
    ASSERT_TRUE(full.ok());
    const Eigen::VectorXd eig = testing::SortedEigenvalues(full->matrix());
    double diff = 0;
    EXPECT_TRUE(SpectraMatch({eig.begin(), eig.end()}, b.ImpliedSpectrum(),
                             1e-8, &diff))
        << spec.DebugString() << " diff " << diff;
  }
}

TEST(BlocksPropertyTest, ConsensusEigenvector) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 50; ++trial) {
    testing::SpecSample sample = RandomSpec(rng, 1, 5, 6, 1, 5);
    const BranchSpec spec{sample.m, sample.n, 1};
    const BlockDecomposition b =
        MustBlocks(spec, RandomWeights(rng, spec, 0.9));
    const Eigen::VectorXd v = ConsensusEigenvector(spec);
    EXPECT_NEAR(v.norm(), 1.0, 1e-14);
    EXPECT_LE((b.w0 * v - v).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(BlocksPropertyTest, InterlacingForArbitraryWeights) {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 60; ++trial) {
    testing::SpecSample sample = RandomSpec(rng, 1, 5, 6, 2, 5);
    const BranchSpec spec{sample.m, sample.n, 1};
    const BlockDecomposition b =
        MustBlocks(spec, RandomWeights(rng, spec, 0.99));
    absl::StatusOr<InterlacingReport> r = CheckInterlacing(b);
    ASSERT_TRUE(r.ok()) << r.status();
    EXPECT_TRUE(r->interlacing_holds)
        << spec.DebugString() << " j=" << r->first_violation;
  }
}

TEST(BlocksTest, InterlacingNeedsTwoBranchesPerType) {
  const BranchSpec spec{{1, 2}, {1, 3}, 1};
  std::mt19937_64 rng(3);
  const BlockDecomposition b = MustBlocks(spec, RandomWeights(rng, spec, 0.3));
  absl::StatusOr<InterlacingReport> r = CheckInterlacing(b);
  EXPECT_EQ(r.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_NE(r.status().message().find("n_p >= 2"), std::string::npos);
}

// At the optimum the top of W_0', the second eigenvalue of W_0 and minus the
// bottom of W_0 all equal cos(theta) (two or more branch types).
TEST(BlocksPropertyTest, OptimalEigenvaluesCoincide) {
  for (const auto& m : testing::TableRowLengths()) {
    for (const auto& n : testing::TableColumnCounts()) {
      const BranchSpec spec{m, n, 1};
      absl::StatusOr<ThetaSolution> s = SolveTheta(spec);
      absl::StatusOr<StratifiedWeights> w = OptimalWeights(spec, *s);
      ASSERT_TRUE(w.ok());
      const BlockDecomposition b = MustBlocks(spec, *w);
      const Eigen::VectorXd e0 = testing::SortedEigenvalues(b.w0);
      const Eigen::VectorXd ep = testing::SortedEigenvalues(b.w0_prime);
      EXPECT_NEAR(ep[0], s->slem, 1e-8) << spec.DebugString();
      EXPECT_NEAR(e0[1], s->slem, 1e-8) << spec.DebugString();
      EXPECT_NEAR(-e0[e0.size() - 1], s->slem, 1e-8) << spec.DebugString();
    }
  }
}

TEST(BlocksPropertyTest, RankOneExpansionReconstructs) {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 30; ++trial) {
    testing::SpecSample sample = RandomSpec(rng, 1, 5, 6, 1, 6);
    const BranchSpec spec{sample.m, sample.n, 1};
    const StratifiedWeights w = RandomWeights(rng, spec, 0.9);
    const BlockDecomposition b = MustBlocks(spec, w);
    absl::StatusOr<RankOneBasis> basis = BuildAlphaBeta(spec);
    ASSERT_TRUE(basis.ok());
    const Eigen::MatrixXd ref = ReferenceW0(spec, w);
    EXPECT_LE((RankOneExpansion(basis->beta, w) - ref).cwiseAbs().maxCoeff(),
              1e-12);
    const int mb = static_cast<int>(ref.rows()) - 1;
    EXPECT_LE((RankOneExpansion(basis->alpha, w) -
               ref.bottomRightCorner(mb, mb))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
}

}  // namespace
}  // namespace starconsensus
