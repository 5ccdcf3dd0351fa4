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

#ifndef STARCONSENSUS_SPECTRAL_H_
#define STARCONSENSUS_SPECTRAL_H_

#include <Eigen/Core>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "starconsensus/topology.h"
#include "starconsensus/weights.h"

namespace starconsensus {

// Symmetric N x N matrix driving x(t + 1) = W x(t). Off-diagonal entries are
// the edge weights, the diagonal makes every row sum to one.
class WeightMatrix {
 public:
  // Wraps an arbitrary dense matrix after checking it is square and
  // symmetric. Row sums are not enforced here; see CheckConsensusConditions.
  static absl::StatusOr<WeightMatrix> FromDense(Eigen::MatrixXd matrix);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  int size() const { return static_cast<int>(matrix_.rows()); }
  double operator()(int i, int j) const { return matrix_(i, j); }

 private:
  explicit WeightMatrix(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {}
  Eigen::MatrixXd matrix_;
};

absl::StatusOr<WeightMatrix> AssembleWeightMatrix(
    const StarNetwork& network, const StratifiedWeights& weights);

// max(lambda_2, -lambda_N) for eigenvalues sorted descending. Requires at
// least two eigenvalues.
double SlemOfSorted(const Eigen::VectorXd& descending);

struct SpectralReport {
  Eigen::VectorXd eigenvalues;  // descending
  double slem = 0.0;
  // Eigenvalues within 1e-10 of one.
  int multiplicity_of_one = 0;
};

absl::StatusOr<SpectralReport> AnalyzeSpectrum(const Eigen::MatrixXd& matrix);
absl::StatusOr<double> Slem(const WeightMatrix& matrix);

// Outcome of the convergence conditions for x(t + 1) = W x(t): W symmetric,
// W 1 = 1, sparsity of the graph, one a simple eigenvalue, SLEM < 1.
struct ConsensusConditions {
  bool symmetric = false;
  bool row_stochastic = false;
  bool sparsity_respected = false;
  bool top_eigenvalue_is_one = false;
  bool top_eigenvalue_simple = false;
  bool slem_below_one = false;
  double slem = 0.0;
  double max_row_sum_error = 0.0;

  bool ok() const {
    return symmetric && row_stochastic && sparsity_respected &&
           top_eigenvalue_is_one && top_eigenvalue_simple && slem_below_one;
  }
  std::string DebugString() const;
};

absl::StatusOr<ConsensusConditions> CheckConsensusConditions(
    const StarNetwork& network, const WeightMatrix& matrix);

// Sorted-list multiset comparison: both lists sorted descending, compared
// elementwise with an absolute tolerance.
bool SpectraMatch(std::vector<double> a, std::vector<double> b,
                  double tolerance, double* max_difference = nullptr);

}  // namespace starconsensus

#endif  // STARCONSENSUS_SPECTRAL_H_
