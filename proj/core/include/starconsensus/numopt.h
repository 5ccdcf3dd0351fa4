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

// Direct numerical minimization of the SLEM over stratum-constant weights.
//
// With one variable per edge stratum, W(w) = I - sum_s w_s L_s where L_s is
// the Laplacian of the edges in stratum s. f(w) = max(lambda_2, -lambda_N) is
// convex in w (a pointwise maximum of extreme eigenvalues of an affine
// matrix map restricted to the complement of the all-ones vector).
//
// The optimizer runs two phases:
//   1. projected subgradient descent with step c / sqrt(t);
//   2. BFGS on the smoothed objective
//        f_mu(w) = mu log tr(exp((W - J) / mu) + exp(-(W - J) / mu)),
//      J = 1 1^T / N, for a decreasing sequence of mu. f_mu upper-bounds f
//      and is within mu log(2N) of it.
// The returned weights are the best iterate by the exact objective.
//
// This does not use the closed form in any way; it is the independent check
// of it, and the only source of optimal weights once K exceeds K_max.

#ifndef STARCONSENSUS_NUMOPT_H_
#define STARCONSENSUS_NUMOPT_H_

#include <Eigen/Core>
#include <vector>

#include "absl/status/statusor.h"
#include "starconsensus/topology.h"
#include "starconsensus/weights.h"

namespace starconsensus {

struct ObjectiveValue {
  double value = 0.0;       // max(lambda_2, -lambda_N)
  double lambda2 = 0.0;
  double lambda_min = 0.0;
  // Gradients of lambda_2 and of -lambda_N with respect to the stratum
  // weights, valid where those eigenvalues are simple.
  std::vector<double> grad_lambda2;
  std::vector<double> grad_neg_lambda_min;
  // A subgradient of `value`: the gradient of the active branch, or the
  // average of both when they tie within the tie tolerance.
  std::vector<double> subgradient;
};

class SlemObjective {
 public:
  explicit SlemObjective(const StarNetwork& network,
                         double tie_tolerance = 1e-9);

  int dimension() const { return static_cast<int>(strata_edges_.size()); }
  int node_count() const { return node_count_; }

  Eigen::MatrixXd Matrix(const std::vector<double>& weights) const;

  ObjectiveValue Evaluate(const std::vector<double>& weights) const;
  double Value(const std::vector<double>& weights) const;

  // f_mu and its gradient.
  double Smoothed(const std::vector<double>& weights, double mu,
                  std::vector<double>* gradient) const;

 private:
  // d lambda / d w_s = -sum_{(a,b) in s} (u_a - u_b)^2 for unit eigenvector u.
  std::vector<double> EigenvalueGradient(
      const Eigen::Ref<const Eigen::VectorXd>& u) const;

  int node_count_;
  double tie_tolerance_;
  std::vector<std::vector<std::pair<int, int>>> strata_edges_;
};

struct OptimizerOptions {
  int subgradient_iterations = 5000;
  double step_scale = 0.1;  // c
  double lower_bound = 1e-6;
  double upper_bound = 1.0 - 1e-6;
  double tie_tolerance = 1e-9;

  bool refine = true;
  std::vector<double> smoothing_schedule = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4,
                                            3e-5, 1e-5, 3e-6, 1e-6};
  int refine_iterations_per_stage = 2000;

  // Keep the best-so-far objective after every iterate.
  bool record_history = false;
};

struct OptimizationResult {
  StratifiedWeights weights;
  double slem = 0.0;
  int iterations = 0;  // subgradient steps plus BFGS steps
  bool converged = false;
  double final_step = 0.0;
  std::vector<double> best_history;
};

// Metropolis weights restricted to one value per stratum.
StratifiedWeights DefaultInitialWeights(const StarNetwork& network);

// Minimizes the SLEM starting from `init`. `tolerance` bounds the change in
// the best objective over the final two refinement stages (or the last 10%
// of subgradient steps when refinement is off) for the run to count as
// converged; a non-converged result is still returned.
absl::StatusOr<OptimizationResult> OptimizeWeights(
    const StarNetwork& network, const StratifiedWeights& init,
    double tolerance, const OptimizerOptions& options = {});

}  // namespace starconsensus

#endif  // STARCONSENSUS_NUMOPT_H_
