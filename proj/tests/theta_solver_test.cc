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

#include "starconsensus/theta_solver.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support/oracles.h"

namespace starconsensus {
namespace {

using ::starconsensus::testing::CofactorDeterminant;
using ::starconsensus::testing::RandomSpec;
using ::starconsensus::testing::ReferenceMatrixA;

constexpr double kPi = std::numbers::pi;

ThetaSolution MustSolve(const BranchSpec& spec) {
  absl::StatusOr<ThetaSolution> s = SolveTheta(spec);
  EXPECT_TRUE(s.ok()) << s.status();
  return *s;
}

// det A with row i scaled by sin(m_i theta): continuous on (0, pi), with
// the same zeros as det A away from the poles.
double ScaledDeterminant(const std::vector<int>& m, const std::vector<int>& n,
                         int k, double theta) {
  std::vector<std::vector<double>> a(m.size(), std::vector<double>(m.size()));
  for (size_t i = 0; i < m.size(); ++i) {
    const double s = std::sin(m[i] * theta);
    for (size_t j = 0; j < m.size(); ++j) {
      a[i][j] = (i == j) ? 2.0 * k / n[i] * std::cos(m[i] * theta) /
                                   std::tan(theta / 2.0) -
                               s
                         : -std::sqrt(static_cast<double>(n[j]) / n[i]) * s;
    }
  }
  return CofactorDeterminant(a);
}

// Smallest root in (0, pi) by a dense scan of the scaled determinant.
double ReferenceSmallestRoot(const std::vector<int>& m,
                             const std::vector<int>& n, int k) {
  const int grid = 200000;
  double prev_t = kPi / grid;
  double prev_f = ScaledDeterminant(m, n, k, prev_t);
  for (int i = 2; i < grid; ++i) {
    const double t = kPi * i / grid;
    const double f = ScaledDeterminant(m, n, k, t);
    if ((prev_f < 0) != (f < 0)) {
      double lo = prev_t;
      double hi = t;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((ScaledDeterminant(m, n, k, lo) < 0) ==
            (ScaledDeterminant(m, n, k, mid) < 0)) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    prev_t = t;
    prev_f = f;
  }
  return std::nan("");
}

TEST(SolveThetaTest, ThreePath) {
  const ThetaSolution s = MustSolve({{1}, {2}, 1});
  EXPECT_NEAR(s.theta, kPi / 3.0, 1e-13);
  EXPECT_NEAR(s.slem, 0.5, 1e-13);
}

// Two branches of length m form a path on 2m + 1 nodes, whose optimal
// SLEM is cos(pi / (2m + 1)).
TEST(SolveThetaTest, TwoEqualBranchesArePath) {
  for (int m = 1; m <= 12; ++m) {
    const ThetaSolution s = MustSolve({{m}, {2}, 1});
    EXPECT_NEAR(s.theta, kPi / (2 * m + 1), 1e-12) << "m=" << m;
  }
}

// A star with n leaves has SLEM n / (n + 2) at center weight 2 / (n + 2).
TEST(SolveThetaTest, LeafStar) {
  for (int n = 1; n <= 30; ++n) {
    const ThetaSolution s = MustSolve({{1}, {n}, 1});
    EXPECT_NEAR(s.slem, static_cast<double>(n) / (n + 2), 1e-12) << "n=" << n;
  }
}

TEST(SolveThetaTest, RootIsSmallestAndConsistent) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    testing::SpecSample sample = RandomSpec(rng, 1, 4, 6, 1, 5);
    sample.k = std::uniform_int_distribution<int>(1, 5)(rng);
    const BranchSpec spec{sample.m, sample.n, sample.k};
    const ThetaSolution s = MustSolve(spec);
    const double reference =
        ReferenceSmallestRoot(sample.m, sample.n, sample.k);
    EXPECT_NEAR(s.theta, reference, 1e-9) << spec.DebugString();
    EXPECT_DOUBLE_EQ(s.slem, std::cos(s.theta));
    EXPECT_LE(s.bracket_lo, s.theta);
    EXPECT_GE(s.bracket_hi, s.theta);
    EXPECT_LE(s.residual, 1e-12) << spec.DebugString();
  }
}

TEST(SolveThetaTest, RejectsInvalidSpec) {
  EXPECT_FALSE(SolveTheta({{1, 1}, {1, 1}, 1}).ok());
  EXPECT_FALSE(SolveTheta({{2}, {1}, 0}).ok());
}

TEST(MatrixATest, MatchesDefinition) {
  const std::vector<int> m = {3, 1, 2};
  const std::vector<int> n = {2, 4, 1};
  const double theta = 0.37;
  absl::StatusOr<std::vector<std::vector<double>>> a =
      MatrixA({m, n, 3}, theta);
  ASSERT_TRUE(a.ok());
  const auto ref = ReferenceMatrixA(m, n, 3, theta);
  for (size_t i = 0; i < m.size(); ++i) {
    for (size_t j = 0; j < m.size(); ++j) {
      EXPECT_NEAR((*a)[i][j], ref[i][j], 1e-13 * (1 + std::abs(ref[i][j])));
    }
  }
}

TEST(MatrixATest, FailsAtPole) {
  EXPECT_FALSE(MatrixA({{2}, {3}, 1}, kPi / 2).ok());
  EXPECT_FALSE(DetA({{2}, {3}, 1}, kPi / 2).ok());
  EXPECT_TRUE(DetA({{2}, {3}, 1}, kPi / 4).ok());
}

// Direct LU, the rank-one reduction and cofactor expansion agree on a grid.
TEST(DeterminantPropertyTest, ReducedMatchesDirect) {
  std::mt19937_64 rng(23);
  int compared = 0;
  for (int trial = 0; trial < 30; ++trial) {
    testing::SpecSample sample = RandomSpec(rng, 1, 5, 7, 1, 6);
    sample.k = std::uniform_int_distribution<int>(1, 4)(rng);
    const BranchSpec spec{sample.m, sample.n, sample.k};
    for (int g = 1; g < 400; ++g) {
      const double theta = kPi * (g + 0.318) / 400.0;
      absl::StatusOr<double> direct = DetA(spec, theta);
      absl::StatusOr<double> reduced = DetAReduced(spec, theta);
      if (!direct.ok()) {
        EXPECT_FALSE(reduced.ok());
        continue;
      }
      ASSERT_TRUE(reduced.ok());
      const auto ref_a = ReferenceMatrixA(sample.m, sample.n, sample.k, theta);
      // Skip points close to a pole, where the determinant is ill-scaled.
      double scale = 1.0;
      for (const auto& row : ref_a) {
        double norm = 0.0;
        for (double x : row) norm += x * x;
        scale *= std::sqrt(norm);
      }
      if (scale > 1e8) continue;
      const double ref = CofactorDeterminant(ref_a);
      EXPECT_NEAR(*direct, *reduced, 1e-10 * scale) << spec.DebugString();
      EXPECT_NEAR(*direct, ref, 1e-10 * scale) << spec.DebugString();
      ++compared;
    }
  }
  EXPECT_GT(compared, 5000);
}

// Single-type specs satisfy the closed scalar root condition.
TEST(ReductionPropertyTest, SingleTypeCondition) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = std::uniform_int_distribution<int>(1, 10)(rng);
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    const double t = MustSolve({{m}, {n}, 1}).theta;
    const double lhs = (n - 2) * std::cos((m - 0.5) * t);
    const double rhs = (n + 2) * std::cos((m + 0.5) * t);
    EXPECT_NEAR(lhs, rhs, 1e-10) << "m=" << m << " n=" << n;
  }
}

// Two-type specs satisfy A_11 A_22 = 1.
TEST(ReductionPropertyTest, TwoTypeCondition) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    testing::SpecSample sample = RandomSpec(rng, 2, 2, 8, 1, 8);
    const double t = MustSolve({sample.m, sample.n, 1}).theta;
    const auto a = ReferenceMatrixA(sample.m, sample.n, 1, t);
    EXPECT_NEAR(a[0][0] * a[1][1], 1.0, 1e-10);
  }
}

TEST(RootFunctionTest, PolesSortedAndInRange) {
  const std::vector<double> poles = RootFunctionPoles({{3, 2}, {1, 1}, 1});
  ASSERT_FALSE(poles.empty());
  EXPECT_DOUBLE_EQ(poles.back(), kPi);
  for (size_t i = 1; i < poles.size(); ++i) EXPECT_LT(poles[i - 1], poles[i]);
  EXPECT_NEAR(poles.front(), kPi / 6, 1e-15);
}

TEST(RootFunctionTest, VanishesAtRoot) {
  const BranchSpec spec{{4, 3, 2}, {1, 2, 3}, 2};
  const ThetaSolution s = MustSolve(spec);
  EXPECT_NEAR(ReducedRootFunction(spec, s.theta), 0.0, 1e-12);
  EXPECT_NEAR(ReducedRootFunction(spec, 1e-9), -1.0, 1e-6);
}

}  // namespace
}  // namespace starconsensus
