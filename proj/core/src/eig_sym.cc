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

#include "starconsensus/eig_sym.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace starconsensus {
namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-14;

double OffDiagonalNorm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

}  // namespace

absl::StatusOr<SymmetricEigen> EigSym(const Eigen::MatrixXd& matrix,
                                      bool compute_vectors) {
  if (matrix.rows() != matrix.cols()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "matrix is ", matrix.rows(), "x", matrix.cols(), ", not square"));
  }
  const Eigen::Index n = matrix.rows();
  SymmetricEigen result;
  if (n == 0) return result;

  const double scale = matrix.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      if (std::abs(matrix(i, j) - matrix(j, i)) >
          kSymmetryTolerance * std::max(scale, 1.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat("matrix is not symmetric at (", i, ", ", j, "): ",
                         matrix(i, j), " vs ", matrix(j, i)));
      }
    }
  }

  Eigen::MatrixXd a = (matrix + matrix.transpose()) / 2;
  Eigen::MatrixXd v;
  if (compute_vectors) v = Eigen::MatrixXd::Identity(n, n);

  const double threshold = kOffDiagonalTolerance * a.norm();
  int sweep = 0;
  while (OffDiagonalNorm(a) >= threshold) {
    if (sweep == kMaxSweeps) {
      return absl::InternalError(absl::StrCat(
          "Jacobi did not converge in ", kMaxSweeps, " sweeps (off = ",
          OffDiagonalNorm(a), ")"));
    }
    ++sweep;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation annihilating a(p, q), smaller of the two angles.
        const double tau_ratio = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t =
            (tau_ratio >= 0 ? 1.0 : -1.0) /
            (std::abs(tau_ratio) + std::sqrt(1.0 + tau_ratio * tau_ratio));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = a(p, r) = arp - s * (arq + arp * tau);
          a(r, q) = a(q, r) = arq + s * (arp - arq * tau);
        }
        if (compute_vectors) {
          for (Eigen::Index r = 0; r < n; ++r) {
            const double vrp = v(r, p);
            const double vrq = v(r, q);
            v(r, p) = vrp - s * (vrq + vrp * tau);
            v(r, q) = vrq + s * (vrp - vrq * tau);
          }
        }
      }
    }
  }
  result.sweeps = sweep;

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](Eigen::Index x, Eigen::Index y) {
                     return a(x, x) > a(y, y);
                   });
  result.values.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) result.values[k] = a(order[k], order[k]);
  if (compute_vectors) {
    result.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::VectorXd col = v.col(order[k]);
      Eigen::Index arg = 0;
      col.cwiseAbs().maxCoeff(&arg);
      if (col[arg] < 0) col = -col;
      result.vectors.col(k) = col;
    }
  }
  return result;
}

absl::StatusOr<Eigen::VectorXd> EigenvaluesSym(const Eigen::MatrixXd& matrix) {
  absl::StatusOr<SymmetricEigen> eig = EigSym(matrix, false);
  if (!eig.ok()) return eig.status();
  return std::move(eig->values);
}

}  // namespace starconsensus
