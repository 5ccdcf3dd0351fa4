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

#include "starconsensus/blocks.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "starconsensus/eig_sym.h"

namespace starconsensus {
namespace {

Eigen::MatrixXd BranchBlock(const std::vector<double>& w) {
  const int m = static_cast<int>(w.size());
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const double next = i + 1 < m ? w[i + 1] : 0.0;
    block(i, i) = 1.0 - w[i] - next;
    if (i + 1 < m) block(i, i + 1) = block(i + 1, i) = next;
  }
  return block;
}

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

std::vector<double> BlockDecomposition::ImpliedSpectrum() const {
  std::vector<double> spectrum = ToStd(EigenvaluesSym(w0).value());
  for (size_t p = 0; p < branch_blocks.size(); ++p) {
    const std::vector<double> block =
        ToStd(EigenvaluesSym(branch_blocks[p]).value());
    for (int copy = 1; copy < spec.counts[p]; ++copy) {
      spectrum.insert(spectrum.end(), block.begin(), block.end());
    }
  }
  return spectrum;
}

absl::StatusOr<BlockDecomposition> BuildBlocks(
    const BranchSpec& spec, const StratifiedWeights& weights) {
  if (absl::Status status = spec.Validate(); !status.ok()) return status;
  if (spec.cores != 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "block decomposition is defined for K = 1, got K = ", spec.cores));
  }
  if (static_cast<int>(weights.by_stratum.size()) != spec.num_types()) {
    return absl::InvalidArgumentError("weights do not match branch types");
  }
  BlockDecomposition d;
  d.spec = spec;
  d.prefix_lengths.push_back(0);
  for (int p = 0; p < spec.num_types(); ++p) {
    if (static_cast<int>(weights.by_stratum[p].size()) != spec.lengths[p]) {
      return absl::InvalidArgumentError(
          absl::StrCat("branch type ", p, " weight count mismatch"));
    }
    d.branch_blocks.push_back(BranchBlock(weights.by_stratum[p]));
    d.prefix_lengths.push_back(d.prefix_lengths.back() + spec.lengths[p]);
  }
  const int total = d.prefix_lengths.back();

  d.w0_prime = Eigen::MatrixXd::Zero(total, total);
  for (int p = 0; p < spec.num_types(); ++p) {
    const int at = d.prefix_lengths[p];
    d.w0_prime.block(at, at, spec.lengths[p], spec.lengths[p]) =
        d.branch_blocks[p];
  }

  d.w0 = Eigen::MatrixXd::Zero(total + 1, total + 1);
  d.w0.bottomRightCorner(total, total) = d.w0_prime;
  double center = 1.0;
  for (int p = 0; p < spec.num_types(); ++p) {
    const double w1 = weights.by_stratum[p][0];
    center -= spec.counts[p] * w1;
    const int head = 1 + d.prefix_lengths[p];
    d.w0(0, head) = d.w0(head, 0) = std::sqrt(spec.counts[p]) * w1;
  }
  d.w0(0, 0) = center;
  return d;
}

Eigen::VectorXd ConsensusEigenvector(const BranchSpec& spec) {
  int total = 0;
  for (int m : spec.lengths) total += m;
  Eigen::VectorXd v(total + 1);
  v[0] = 1.0;
  int at = 1;
  for (int p = 0; p < spec.num_types(); ++p) {
    for (int i = 0; i < spec.lengths[p]; ++i) {
      v[at++] = std::sqrt(spec.counts[p]);
    }
  }
  return v / std::sqrt(static_cast<double>(spec.NodeCount()));
}

absl::StatusOr<InterlacingReport> CheckInterlacing(
    const BlockDecomposition& blocks) {
  if (!blocks.spec.AllCountsAtLeastTwo()) {
    return absl::FailedPreconditionError(
        "n_p >= 2 required for every branch type");
  }
  absl::StatusOr<Eigen::VectorXd> outer = EigenvaluesSym(blocks.w0);
  if (!outer.ok()) return outer.status();
  absl::StatusOr<Eigen::VectorXd> inner = EigenvaluesSym(blocks.w0_prime);
  if (!inner.ok()) return inner.status();

  InterlacingReport report;
  // Absolute slack for rounding in the two eigensolves.
  constexpr double kSlack = 1e-12;
  for (Eigen::Index j = 0; j < inner->size(); ++j) {
    const double below = (*outer)[j + 1] - (*inner)[j];
    const double above = (*inner)[j] - (*outer)[j];
    const double violation = std::max(below, above);
    if (violation > kSlack) {
      if (report.interlacing_holds) report.first_violation = static_cast<int>(j);
      report.interlacing_holds = false;
    }
    report.max_violation = std::max(report.max_violation, violation);
  }
  report.lambda1_w0_prime = (*inner)[0];
  report.lambda2_w0 = (*outer)[1];
  report.lambda_min_w0 = (*outer)[outer->size() - 1];
  const double moduli[] = {std::abs(report.lambda1_w0_prime),
                           std::abs(report.lambda2_w0),
                           std::abs(report.lambda_min_w0)};
  report.modulus_spread = *std::max_element(std::begin(moduli), std::end(moduli)) -
                          *std::min_element(std::begin(moduli), std::end(moduli));
  return report;
}

absl::StatusOr<RankOneBasis> BuildAlphaBeta(const BranchSpec& spec) {
  if (absl::Status status = spec.Validate(); !status.ok()) return status;
  if (spec.cores != 1) {
    return absl::InvalidArgumentError("alpha/beta vectors are defined for K = 1");
  }
  int total = 0;
  for (int m : spec.lengths) total += m;

  RankOneBasis basis;
  int offset = 0;  // M_{p-1}
  for (int p = 0; p < spec.num_types(); ++p) {
    std::vector<Eigen::VectorXd> alpha;
    std::vector<Eigen::VectorXd> beta;
    for (int i = 0; i < spec.lengths[p]; ++i) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(total);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(total + 1);
      a[offset + i] = 1.0;
      b[1 + offset + i] = 1.0;
      if (i == 0) {
        b[0] = -std::sqrt(spec.counts[p]);
      } else {
        a[offset + i - 1] = -1.0;
        b[offset + i] = -1.0;
      }
      alpha.push_back(std::move(a));
      beta.push_back(std::move(b));
    }
    basis.alpha.push_back(std::move(alpha));
    basis.beta.push_back(std::move(beta));
    offset += spec.lengths[p];
  }
  return basis;
}

Eigen::MatrixXd RankOneExpansion(
    const std::vector<std::vector<Eigen::VectorXd>>& generators,
    const StratifiedWeights& weights) {
  const Eigen::Index size = generators.front().front().size();
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(size, size);
  for (size_t p = 0; p < generators.size(); ++p) {
    for (size_t i = 0; i < generators[p].size(); ++i) {
      const Eigen::VectorXd& g = generators[p][i];
      result.noalias() -= weights.by_stratum[p][i] * g * g.transpose();
    }
  }
  return result;
}

}  // namespace starconsensus
