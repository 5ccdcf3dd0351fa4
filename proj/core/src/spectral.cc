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

#include "starconsensus/spectral.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "starconsensus/eig_sym.h"

namespace starconsensus {
namespace {

constexpr double kUnitEigenvalueTolerance = 1e-10;
constexpr double kRowSumTolerance = 1e-12;

}  // namespace

absl::StatusOr<WeightMatrix> WeightMatrix::FromDense(Eigen::MatrixXd matrix) {
  if (matrix.rows() != matrix.cols()) {
    return absl::InvalidArgumentError("weight matrix must be square");
  }
  if (matrix != matrix.transpose()) {
    return absl::InvalidArgumentError("weight matrix must be symmetric");
  }
  return WeightMatrix(std::move(matrix));
}

absl::StatusOr<WeightMatrix> AssembleWeightMatrix(
    const StarNetwork& network, const StratifiedWeights& weights) {
  if (absl::Status status = weights.CheckCoverage(network); !status.ok()) {
    return status;
  }
  const int n = network.node_count();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  const auto& edges = network.edges();
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    const double value = weights.EdgeWeight(network, e);
    w(edges[e].u, edges[e].v) = value;
    w(edges[e].v, edges[e].u) = value;
  }
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j : network.Neighbors(i)) off += w(i, j);
    w(i, i) = 1.0 - off;
  }
  return WeightMatrix::FromDense(std::move(w));
}

double SlemOfSorted(const Eigen::VectorXd& descending) {
  return std::max(descending[1], -descending[descending.size() - 1]);
}

absl::StatusOr<SpectralReport> AnalyzeSpectrum(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() < 2) {
    return absl::InvalidArgumentError("SLEM needs at least two eigenvalues");
  }
  absl::StatusOr<Eigen::VectorXd> values = EigenvaluesSym(matrix);
  if (!values.ok()) return values.status();
  SpectralReport report;
  report.eigenvalues = std::move(*values);
  report.slem = SlemOfSorted(report.eigenvalues);
  for (double x : report.eigenvalues) {
    if (std::abs(x - 1.0) <= kUnitEigenvalueTolerance) {
      ++report.multiplicity_of_one;
    }
  }
  return report;
}

absl::StatusOr<double> Slem(const WeightMatrix& matrix) {
  absl::StatusOr<SpectralReport> report = AnalyzeSpectrum(matrix.matrix());
  if (!report.ok()) return report.status();
  return report->slem;
}

std::string ConsensusConditions::DebugString() const {
  return absl::StrCat(
      "symmetric=", symmetric, " row_stochastic=", row_stochastic,
      " (max err ", max_row_sum_error, ") sparsity=", sparsity_respected,
      " lambda1_is_one=", top_eigenvalue_is_one,
      " lambda1_simple=", top_eigenvalue_simple, " slem=", slem,
      " slem_below_one=", slem_below_one);
}

absl::StatusOr<ConsensusConditions> CheckConsensusConditions(
    const StarNetwork& network, const WeightMatrix& matrix) {
  const Eigen::MatrixXd& w = matrix.matrix();
  const int n = matrix.size();
  if (n != network.node_count()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "matrix is ", n, "x", n, " but network has ", network.node_count(),
        " nodes"));
  }
  ConsensusConditions result;
  result.symmetric = (w == w.transpose());
  result.max_row_sum_error =
      (w.rowwise().sum().array() - 1.0).abs().maxCoeff();
  result.row_stochastic = result.max_row_sum_error <= kRowSumTolerance;

  result.sparsity_respected = true;
  for (int i = 0; i < n && result.sparsity_respected; ++i) {
    const auto& nbrs = network.Neighbors(i);
    for (int j = 0; j < n; ++j) {
      if (i == j || w(i, j) == 0.0) continue;
      if (!std::binary_search(nbrs.begin(), nbrs.end(), j)) {
        result.sparsity_respected = false;
        break;
      }
    }
  }

  absl::StatusOr<SpectralReport> report = AnalyzeSpectrum(w);
  if (!report.ok()) return report.status();
  result.top_eigenvalue_is_one =
      std::abs(report->eigenvalues[0] - 1.0) <= kUnitEigenvalueTolerance;
  result.top_eigenvalue_simple = report->multiplicity_of_one == 1;
  result.slem = report->slem;
  result.slem_below_one = report->slem < 1.0;
  return result;
}

bool SpectraMatch(std::vector<double> a, std::vector<double> b,
                  double tolerance, double* max_difference) {
  if (a.size() != b.size()) {
    if (max_difference != nullptr) {
      *max_difference = std::numeric_limits<double>::infinity();
    }
    return false;
  }
  std::sort(a.begin(), a.end(), std::greater<>());
  std::sort(b.begin(), b.end(), std::greater<>());
  double worst = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    worst = std::max(worst, std::abs(a[k] - b[k]));
  }
  if (max_difference != nullptr) *max_difference = worst;
  return worst <= tolerance;
}

}  // namespace starconsensus
