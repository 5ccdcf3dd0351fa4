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

// Stratified (block-diagonal) form of the weight matrix of a generic star
// (K = 1) with stratum-constant weights.
//
// In the basis that applies a unitary DFT across the n_p identical branches
// of each type, W becomes diag(W_0, W_1 x (n_1 - 1), ..., W_B x (n_B - 1)):
//
//   W_p  (m_p x m_p)  tridiagonal, diagonal 1 - w_i - w_{i+1} (w_{m+1} = 0),
//                     off-diagonal w_{i+1};
//   W_0  (1 + M_B)    center entry 1 - sum_p n_p w_1^(p), coupled to the head
//                     of each W_p block by sqrt(n_p) w_1^(p);
//   W_0' = diag(W_1, ..., W_B), the trailing principal submatrix of W_0.
//
// M_p = m_1 + ... + m_p. The change of basis itself is never formed.

#ifndef STARCONSENSUS_BLOCKS_H_
#define STARCONSENSUS_BLOCKS_H_

#include <Eigen/Core>
#include <vector>

#include "absl/status/statusor.h"
#include "starconsensus/topology.h"
#include "starconsensus/weights.h"

namespace starconsensus {

struct BlockDecomposition {
  BranchSpec spec;
  std::vector<Eigen::MatrixXd> branch_blocks;  // W_p
  Eigen::MatrixXd w0;
  Eigen::MatrixXd w0_prime;
  std::vector<int> prefix_lengths;  // M_0 = 0, M_1, ..., M_B

  // eig(W_0) plus n_p - 1 copies of eig(W_p), i.e. the spectrum the full
  // weight matrix must have.
  std::vector<double> ImpliedSpectrum() const;
};

// Fails for K > 1.
absl::StatusOr<BlockDecomposition> BuildBlocks(
    const BranchSpec& spec, const StratifiedWeights& weights);

// Unit eigenvector of W_0 for eigenvalue one: (1, sqrt(n_p) repeated m_p
// times for each p) / sqrt(N).
Eigen::VectorXd ConsensusEigenvector(const BranchSpec& spec);

struct InterlacingReport {
  // lambda_{j+1}(W_0) <= lambda_j(W_0') <= lambda_j(W_0) for all j.
  bool interlacing_holds = true;
  int first_violation = -1;  // 0-based j, or -1
  double max_violation = 0.0;

  double lambda1_w0_prime = 0.0;
  double lambda2_w0 = 0.0;
  double lambda_min_w0 = 0.0;
  // max minus min of |lambda1(W_0')|, |lambda2(W_0)|, |lambda_min(W_0)|.
  double modulus_spread = 0.0;
};

// Requires every n_p >= 2; otherwise returns FailedPrecondition with the
// reason, so callers can report the check as skipped.
absl::StatusOr<InterlacingReport> CheckInterlacing(
    const BlockDecomposition& blocks);

// Rank-one generators: W_0' = I - sum w_i^(p) a a^T over alpha vectors and
// W_0 = I - sum w_i^(p) b b^T over beta vectors. Indexed [p][i].
struct RankOneBasis {
  std::vector<std::vector<Eigen::VectorXd>> alpha;  // length M_B
  std::vector<std::vector<Eigen::VectorXd>> beta;   // length 1 + M_B
};

absl::StatusOr<RankOneBasis> BuildAlphaBeta(const BranchSpec& spec);

// I - sum_{p,i} w[p][i] g g^T for generators g taken from `generators`.
Eigen::MatrixXd RankOneExpansion(
    const std::vector<std::vector<Eigen::VectorXd>>& generators,
    const StratifiedWeights& weights);

}  // namespace starconsensus

#endif  // STARCONSENSUS_BLOCKS_H_
