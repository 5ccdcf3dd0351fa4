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

// Dense symmetric eigensolver based on cyclic Jacobi rotations.

#ifndef STARCONSENSUS_EIG_SYM_H_
#define STARCONSENSUS_EIG_SYM_H_

#include <Eigen/Core>

#include "absl/status/statusor.h"

namespace starconsensus {

struct SymmetricEigen {
  // Descending.
  Eigen::VectorXd values;
  // Column k is the unit eigenvector of values[k], with its largest-magnitude
  // entry made positive. Empty when vectors were not requested.
  Eigen::MatrixXd vectors;
  int sweeps = 0;
};

// Entries may differ from their transpose by at most this much, relative to
// the largest entry, before the input is rejected as non-symmetric.
inline constexpr double kSymmetryTolerance = 1e-12;

// Sweeps until off(A) < 1e-14 ||A||_F.
absl::StatusOr<SymmetricEigen> EigSym(const Eigen::MatrixXd& matrix,
                                      bool compute_vectors = true);

absl::StatusOr<Eigen::VectorXd> EigenvaluesSym(const Eigen::MatrixXd& matrix);

}  // namespace starconsensus

#endif  // STARCONSENSUS_EIG_SYM_H_
