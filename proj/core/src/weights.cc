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

#include "starconsensus/weights.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "starconsensus/eig_sym.h"

namespace starconsensus {
namespace {

constexpr double kDegenerateDenominator = 1e-14;

// Baseline weights are a function of the two endpoint degrees, so they are
// constant within each stratum; the stratum view takes the first edge.
StratifiedWeights FromPerEdge(const StarNetwork& network, Scheme scheme,
                              std::vector<double> per_edge) {
  StratifiedWeights weights;
  weights.scheme = scheme;
  const BranchSpec& spec = network.spec();
  weights.by_stratum.resize(spec.num_types());
  for (int p = 0; p < spec.num_types(); ++p) {
    weights.by_stratum[p].resize(spec.lengths[p]);
  }
  for (const Stratum& stratum : network.strata()) {
    weights.by_stratum[stratum.id.type][stratum.id.position] =
        per_edge[stratum.edges.front()];
  }
  weights.per_edge = std::move(per_edge);
  return weights;
}

}  // namespace

std::string_view SchemeName(Scheme scheme) {
  switch (scheme) {
    case Scheme::kOptimal:
      return "optimal";
    case Scheme::kMetropolis:
      return "metropolis";
    case Scheme::kMaxDegree:
      return "max_degree";
    case Scheme::kBestConstant:
      return "best_constant";
    case Scheme::kNumeric:
      return "numeric";
  }
  return "unknown";
}

absl::StatusOr<Scheme> ParseScheme(std::string_view name) {
  for (Scheme s : {Scheme::kOptimal, Scheme::kMetropolis, Scheme::kMaxDegree,
                   Scheme::kBestConstant, Scheme::kNumeric}) {
    if (SchemeName(s) == name) return s;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown scheme '", std::string(name),
      "' (expected optimal, metropolis, max_degree, best_constant, numeric)"));
}

double StratifiedWeights::EdgeWeight(const StarNetwork& network,
                                     int edge) const {
  if (has_per_edge()) return per_edge[edge];
  const StratumId id = network.edges()[edge].stratum;
  return by_stratum[id.type][id.position];
}

absl::Status StratifiedWeights::CheckCoverage(
    const StarNetwork& network) const {
  const BranchSpec& spec = network.spec();
  if (static_cast<int>(by_stratum.size()) != spec.num_types()) {
    return absl::InvalidArgumentError(
        absl::StrCat("weights cover ", by_stratum.size(),
                     " branch types, network has ", spec.num_types()));
  }
  for (int p = 0; p < spec.num_types(); ++p) {
    if (static_cast<int>(by_stratum[p].size()) != spec.lengths[p]) {
      return absl::InvalidArgumentError(absl::StrCat(
          "branch type ", p, " has ", by_stratum[p].size(),
          " stratum weights, expected ", spec.lengths[p]));
    }
    for (double w : by_stratum[p]) {
      if (!std::isfinite(w)) {
        return absl::InvalidArgumentError(
            absl::StrCat("non-finite weight in branch type ", p));
      }
    }
  }
  if (has_per_edge()) {
    if (per_edge.size() != network.edges().size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("per-edge weights have ", per_edge.size(),
                       " entries, network has ", network.edges().size(),
                       " edges"));
    }
    for (double w : per_edge) {
      if (!std::isfinite(w)) {
        return absl::InvalidArgumentError("non-finite per-edge weight");
      }
    }
  }
  return absl::OkStatus();
}

absl::Status StratifiedWeights::CheckRange() const {
  for (size_t p = 0; p < by_stratum.size(); ++p) {
    for (size_t i = 0; i < by_stratum[p].size(); ++i) {
      const double w = by_stratum[p][i];
      if (!(w > 0.0 && w < 1.0)) {
        return absl::OutOfRangeError(absl::StrCat(
            "weight w[", p, "][", i, "] = ", w, " is outside (0, 1)"));
      }
    }
  }
  for (size_t e = 0; e < per_edge.size(); ++e) {
    if (!(per_edge[e] > 0.0 && per_edge[e] < 1.0)) {
      return absl::OutOfRangeError(absl::StrCat(
          "edge weight ", e, " = ", per_edge[e], " is outside (0, 1)"));
    }
  }
  return absl::OkStatus();
}

std::vector<double> StratifiedWeights::Flatten() const {
  std::vector<double> flat;
  for (const auto& type : by_stratum) {
    flat.insert(flat.end(), type.begin(), type.end());
  }
  return flat;
}

StratifiedWeights StratifiedWeights::FromFlat(const BranchSpec& spec,
                                              Scheme scheme,
                                              const std::vector<double>& flat) {
  StratifiedWeights weights;
  weights.scheme = scheme;
  size_t k = 0;
  for (int m : spec.lengths) {
    weights.by_stratum.emplace_back(flat.begin() + k, flat.begin() + k + m);
    k += m;
  }
  return weights;
}

absl::StatusOr<StratifiedWeights> OptimalWeights(
    const BranchSpec& spec, const ThetaSolution& solution) {
  if (absl::Status status = spec.Validate(); !status.ok()) return status;
  const double theta = solution.theta;
  StratifiedWeights weights;
  weights.scheme = Scheme::kOptimal;
  for (int p = 0; p < spec.num_types(); ++p) {
    const int m = spec.lengths[p];
    const double numerator = std::sin(m * theta);
    const double denominator = numerator - std::sin((m - 1) * theta);
    if (std::abs(denominator) < kDegenerateDenominator) {
      return absl::FailedPreconditionError(absl::StrCat(
          "degenerate center weight for branch length ", m, " at theta = ",
          theta));
    }
    std::vector<double> type(m, 0.5);
    type[0] = (1.0 - std::cos(theta)) * numerator / denominator / spec.cores;
    weights.by_stratum.push_back(std::move(type));
  }
  return weights;
}

absl::StatusOr<StratifiedWeights> OptimalWeights(const BranchSpec& spec) {
  absl::StatusOr<ThetaSolution> solution = SolveTheta(spec);
  if (!solution.ok()) return solution.status();
  return OptimalWeights(spec, *solution);
}

StratifiedWeights MetropolisWeights(const StarNetwork& network) {
  std::vector<double> per_edge;
  per_edge.reserve(network.edges().size());
  for (const Edge& e : network.edges()) {
    per_edge.push_back(
        1.0 / (1.0 + std::max(network.Degree(e.u), network.Degree(e.v))));
  }
  return FromPerEdge(network, Scheme::kMetropolis, std::move(per_edge));
}

StratifiedWeights MaxDegreeWeights(const StarNetwork& network) {
  std::vector<double> per_edge(network.edges().size(),
                               1.0 / network.MaxDegree());
  return FromPerEdge(network, Scheme::kMaxDegree, std::move(per_edge));
}

double BestConstantAlpha(const StarNetwork& network) {
  const int n = network.node_count();
  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : network.edges()) {
    laplacian(e.u, e.v) -= 1.0;
    laplacian(e.v, e.u) -= 1.0;
    laplacian(e.u, e.u) += 1.0;
    laplacian(e.v, e.v) += 1.0;
  }
  // The Laplacian is exactly symmetric, so EigSym cannot reject it.
  const Eigen::VectorXd eig = EigenvaluesSym(laplacian).value();
  // Descending: eig[0] is the largest, eig[n - 2] the algebraic connectivity.
  return 2.0 / (eig[0] + eig[n - 2]);
}

StratifiedWeights BestConstantWeights(const StarNetwork& network) {
  std::vector<double> per_edge(network.edges().size(),
                               BestConstantAlpha(network));
  return FromPerEdge(network, Scheme::kBestConstant, std::move(per_edge));
}

absl::StatusOr<StratifiedWeights> WeightsForScheme(const StarNetwork& network,
                                                   Scheme scheme) {
  switch (scheme) {
    case Scheme::kOptimal:
      return OptimalWeights(network.spec());
    case Scheme::kMetropolis:
      return MetropolisWeights(network);
    case Scheme::kMaxDegree:
      return MaxDegreeWeights(network);
    case Scheme::kBestConstant:
      return BestConstantWeights(network);
    case Scheme::kNumeric:
      break;
  }
  return absl::InvalidArgumentError(
      "numeric weights come from the optimizer, not a formula");
}

double CentralReplicaEigenvalue(const BranchSpec& spec,
                                const StratifiedWeights& weights) {
  double sum = 0.0;
  for (int p = 0; p < spec.num_types(); ++p) {
    sum += spec.counts[p] * weights.by_stratum[p][0];
  }
  return 1.0 - sum;
}

absl::StatusOr<KMaxResult> KMax(BranchSpec spec, int k_limit) {
  spec.cores = 1;
  if (absl::Status status = spec.Validate(); !status.ok()) return status;

  KMaxResult result;
  double prev_replica = 0.0;
  double prev_slem = 0.0;
  for (int k = 1; k <= k_limit; ++k) {
    spec.cores = k;
    absl::StatusOr<ThetaSolution> solution = SolveTheta(spec);
    if (!solution.ok()) return solution.status();
    absl::StatusOr<StratifiedWeights> weights = OptimalWeights(spec, *solution);
    if (!weights.ok()) return weights.status();
    const double replica = CentralReplicaEigenvalue(spec, *weights);
    const bool admissible = replica < solution->slem;
    // K = 1 has no replica eigenvalue, so it is admissible regardless.
    if (!admissible && k > 1) {
      result.k_max = k - 1;
      result.replica_at_max = prev_replica;
      result.slem_at_max = prev_slem;
      result.replica_after = replica;
      result.slem_after = solution->slem;
      return result;
    }
    prev_replica = replica;
    prev_slem = solution->slem;
  }
  return absl::ResourceExhaustedError(absl::StrCat(
      "K_max search for ", spec.DebugString(), " exceeded K = ", k_limit));
}

}  // namespace starconsensus
