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

// Edge weights for the consensus iteration on star networks.
//
// Four schemes are provided. The closed-form optimum assigns 1/2 to every
// edge inside a branch and
//
//   w_1^(p) = (1/K) (1 - cos t) sin(m_p t) / (sin(m_p t) - sin((m_p - 1) t))
//
// to every center-to-head edge of branch type p, where t is the smallest root
// of det A(t) = 0 in (0, pi) (see theta_solver.h). The other three schemes
// (Metropolis-Hastings, maximum-degree, best-constant) are degree-based
// heuristics used as baselines.

#ifndef STARCONSENSUS_WEIGHTS_H_
#define STARCONSENSUS_WEIGHTS_H_

#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "starconsensus/theta_solver.h"
#include "starconsensus/topology.h"

namespace starconsensus {

enum class Scheme {
  kOptimal,
  kMetropolis,
  kMaxDegree,
  kBestConstant,
  // Produced by the numerical optimizer in numopt.h.
  kNumeric,
};

std::string_view SchemeName(Scheme scheme);
absl::StatusOr<Scheme> ParseScheme(std::string_view name);

// The four schemes that have a defining formula, in report order.
inline constexpr Scheme kFormulaSchemes[] = {
    Scheme::kOptimal, Scheme::kMetropolis, Scheme::kMaxDegree,
    Scheme::kBestConstant};

// One weight per edge stratum, w[p][i] with i = 0 the center-to-head edge.
// Degree-based schemes additionally carry the full per-edge vector; those
// schemes are constant within a stratum by symmetry, so `by_stratum` is
// populated for them too.
struct StratifiedWeights {
  Scheme scheme = Scheme::kOptimal;
  std::vector<std::vector<double>> by_stratum;
  std::vector<double> per_edge;  // empty unless the scheme is per-edge

  bool has_per_edge() const { return !per_edge.empty(); }

  // Weight on edge `edge` of `network`.
  double EdgeWeight(const StarNetwork& network, int edge) const;

  // Checks that the weights cover exactly the strata (and edges, when
  // per-edge) of `network` and are finite.
  absl::Status CheckCoverage(const StarNetwork& network) const;

  // Checks 0 < w < 1 for every stratum and per-edge weight.
  absl::Status CheckRange() const;

  // Strata in (type, position) order.
  std::vector<double> Flatten() const;
  static StratifiedWeights FromFlat(const BranchSpec& spec, Scheme scheme,
                                    const std::vector<double>& flat);
};

// Closed-form optimal weights for `spec` at the solved angle.
absl::StatusOr<StratifiedWeights> OptimalWeights(const BranchSpec& spec,
                                                 const ThetaSolution& solution);

// Convenience: SolveTheta followed by OptimalWeights.
absl::StatusOr<StratifiedWeights> OptimalWeights(const BranchSpec& spec);

// 1 / (1 + max(d_u, d_v)) on every edge.
StratifiedWeights MetropolisWeights(const StarNetwork& network);

// 1 / max_k d_k on every edge.
StratifiedWeights MaxDegreeWeights(const StarNetwork& network);

// The constant 2 / (lambda_1(L) + lambda_{N-1}(L)) on every edge, with
// L = D - Adjacency the graph Laplacian.
StratifiedWeights BestConstantWeights(const StarNetwork& network);

// The alpha used by BestConstantWeights.
double BestConstantAlpha(const StarNetwork& network);

// Dispatches on `scheme`; kNumeric is rejected.
absl::StatusOr<StratifiedWeights> WeightsForScheme(const StarNetwork& network,
                                                   Scheme scheme);

// Result of the K_max search.
struct KMaxResult {
  int k_max = 1;
  // The central-replica eigenvalue 1 - sum_p n_p w_1^(p) and cos(theta) at
  // K_max and at K_max + 1, for reporting the boundary.
  double replica_at_max = 0.0;
  double slem_at_max = 0.0;
  double replica_after = 0.0;
  double slem_after = 0.0;
};

// Largest K >= 1 for which the central-replica eigenvalue of the K-cored
// closed form is strictly below cos(theta(K)). The `cores` field of `spec`
// is ignored. K = 1 is always admissible: the replica eigenvalue has
// multiplicity K - 1.
absl::StatusOr<KMaxResult> KMax(BranchSpec spec, int k_limit = 100000);

// 1 - sum_p n_p w_1^(p) for the closed form at the spec's own K.
double CentralReplicaEigenvalue(const BranchSpec& spec,
                                const StratifiedWeights& weights);

}  // namespace starconsensus

#endif  // STARCONSENSUS_WEIGHTS_H_
