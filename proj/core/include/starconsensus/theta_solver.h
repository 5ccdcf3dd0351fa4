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

// The characteristic angle of a (K-cored) generic star.
//
// With c_i(t) = (2K / n_i) cot(m_i t) cot(t / 2), the B x B matrix A(t) has
// diagonal c_i - 1 and off-diagonal -sqrt(n_j / n_i). The optimal SLEM is
// cos(t*) where t* is the smallest root of det A in (0, pi).
//
// A = diag(c) - u v^T with u_i = 1/sqrt(n_i), v_j = sqrt(n_j), so
// det A = prod_i c_i - sum_i prod_{j != i} c_j. Root finding works on the
// pole-free form g(t) = sum_i (n_i / 2K) tan(m_i t) tan(t / 2) - 1, which has
// the same zeros wherever every c_i is finite and nonzero.

#ifndef STARCONSENSUS_THETA_SOLVER_H_
#define STARCONSENSUS_THETA_SOLVER_H_

#include <vector>

#include "absl/status/statusor.h"
#include "starconsensus/topology.h"

namespace starconsensus {

struct ThetaSolution {
  double theta = 0.0;
  double slem = 0.0;  // cos(theta)
  // |g(theta)| at the returned root, with g the pole-free root function
  // below; zero up to rounding.
  double residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

// The matrix A(theta) itself. Fails near a pole of any cotangent term.
absl::StatusOr<std::vector<std::vector<double>>> MatrixA(
    const BranchSpec& spec, double theta);

// det A(theta) by LU factorization of the B x B matrix.
absl::StatusOr<double> DetA(const BranchSpec& spec, double theta);

// det A(theta) by the rank-one (matrix determinant lemma) reduction.
absl::StatusOr<double> DetAReduced(const BranchSpec& spec, double theta);

// g(theta) = sum_i (n_i / 2K) tan(m_i theta) tan(theta / 2) - 1.
double ReducedRootFunction(const BranchSpec& spec, double theta);

// Poles of g in (0, pi]: (2k + 1) pi / (2 m_i) and pi itself, sorted and
// deduplicated.
std::vector<double> RootFunctionPoles(const BranchSpec& spec);

// Smallest root of det A in (0, pi). Scans a uniform grid of
// 4096 max(m_i) cells over each pole-free interval of g and bisects the first
// sign change down to the floating-point resolution of theta.
absl::StatusOr<ThetaSolution> SolveTheta(const BranchSpec& spec);

}  // namespace starconsensus

#endif  // STARCONSENSUS_THETA_SOLVER_H_
