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

#include "starconsensus/theta_solver.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace starconsensus {
namespace {

constexpr double kPi = std::numbers::pi;

// Cotangent arguments closer than this (in |sin|) to a pole are refused.
constexpr double kPoleThreshold = 1e-12;

// Offset from a pole at which the one-sided limit of g is sampled.
constexpr double kPoleOffset = 1e-12;

constexpr int kCellsPerUnitLength = 4096;

absl::StatusOr<std::vector<double>> DiagonalTerms(const BranchSpec& spec,
                                                  double theta) {
  const double half = std::sin(theta / 2);
  if (std::abs(half) < kPoleThreshold) {
    return absl::FailedPreconditionError(
        absl::StrCat("theta = ", theta, " is at a pole of cot(theta/2)"));
  }
  const double cot_half = std::cos(theta / 2) / half;
  std::vector<double> c(spec.lengths.size());
  for (size_t i = 0; i < c.size(); ++i) {
    const double arg = spec.lengths[i] * theta;
    const double s = std::sin(arg);
    if (std::abs(s) < kPoleThreshold) {
      return absl::FailedPreconditionError(
          absl::StrCat("theta = ", theta, " is at a pole of cot(",
                       spec.lengths[i], " theta)"));
    }
    c[i] = 2.0 * spec.cores / spec.counts[i] * (std::cos(arg) / s) * cot_half;
  }
  return c;
}

int SignOf(double x) { return (x > 0) - (x < 0); }

}  // namespace

absl::StatusOr<std::vector<std::vector<double>>> MatrixA(
    const BranchSpec& spec, double theta) {
  absl::StatusOr<std::vector<double>> c = DiagonalTerms(spec, theta);
  if (!c.ok()) return c.status();
  const size_t b = c->size();
  std::vector<std::vector<double>> a(b, std::vector<double>(b));
  for (size_t i = 0; i < b; ++i) {
    for (size_t j = 0; j < b; ++j) {
      a[i][j] = i == j ? (*c)[i] - 1.0
                       : -std::sqrt(static_cast<double>(spec.counts[j]) /
                                    spec.counts[i]);
    }
  }
  return a;
}

absl::StatusOr<double> DetA(const BranchSpec& spec, double theta) {
  absl::StatusOr<std::vector<std::vector<double>>> a = MatrixA(spec, theta);
  if (!a.ok()) return a.status();
  const int b = static_cast<int>(a->size());
  Eigen::MatrixXd m(b, b);
  for (int i = 0; i < b; ++i) {
    for (int j = 0; j < b; ++j) m(i, j) = (*a)[i][j];
  }
  return m.partialPivLu().determinant();
}

absl::StatusOr<double> DetAReduced(const BranchSpec& spec, double theta) {
  absl::StatusOr<std::vector<double>> c = DiagonalTerms(spec, theta);
  if (!c.ok()) return c.status();
  // prod_i c_i - sum_i prod_{j != i} c_j, without dividing by any c_i.
  double product = 1.0;
  for (double ci : *c) product *= ci;
  double leave_one_out = 0.0;
  for (size_t i = 0; i < c->size(); ++i) {
    double term = 1.0;
    for (size_t j = 0; j < c->size(); ++j) {
      if (j != i) term *= (*c)[j];
    }
    leave_one_out += term;
  }
  return product - leave_one_out;
}

double ReducedRootFunction(const BranchSpec& spec, double theta) {
  const double tan_half = std::tan(theta / 2);
  double sum = 0.0;
  for (size_t i = 0; i < spec.lengths.size(); ++i) {
    sum += spec.counts[i] / (2.0 * spec.cores) *
           std::tan(spec.lengths[i] * theta) * tan_half;
  }
  return sum - 1.0;
}

std::vector<double> RootFunctionPoles(const BranchSpec& spec) {
  std::vector<double> poles = {kPi};
  for (int m : spec.lengths) {
    for (int k = 0; 2 * k + 1 < 2 * m; ++k) {
      poles.push_back((2 * k + 1) * kPi / (2.0 * m));
    }
  }
  std::sort(poles.begin(), poles.end());
  poles.erase(std::unique(poles.begin(), poles.end(),
                          [](double a, double b) {
                            return std::abs(a - b) < 1e-14;
                          }),
              poles.end());
  return poles;
}

absl::StatusOr<ThetaSolution> SolveTheta(const BranchSpec& spec) {
  if (absl::Status status = spec.Validate(); !status.ok()) return status;

  const int max_length =
      *std::max_element(spec.lengths.begin(), spec.lengths.end());
  const int cells = kCellsPerUnitLength * max_length;
  const double step = kPi / cells;
  auto g = [&spec](double t) { return ReducedRootFunction(spec, t); };

  // Walk the pole-free intervals left to right. Within each, sample the
  // interior grid points plus the two one-sided limits next to the poles.
  double interval_lo = 0.0;
  for (double pole : RootFunctionPoles(spec)) {
    std::vector<double> samples;
    // g(0+) = -1; the first interval starts from the analytic limit.
    samples.push_back(interval_lo == 0.0 ? 0.0 : interval_lo + kPoleOffset);
    for (int k = static_cast<int>(std::floor(interval_lo / step)) + 1;
         k * step < pole; ++k) {
      const double t = k * step;
      if (t - interval_lo > kPoleOffset && pole - t > kPoleOffset) {
        samples.push_back(t);
      }
    }
    samples.push_back(pole - kPoleOffset);

    double prev_t = samples.front();
    double prev_g = prev_t == 0.0 ? -1.0 : g(prev_t);
    for (size_t s = 1; s < samples.size(); ++s) {
      const double t = samples[s];
      const double gt = g(t);
      if (SignOf(prev_g) * SignOf(gt) <= 0) {
        double lo = prev_t;
        double hi = t;
        double g_lo = prev_g;
        const double bracket_lo = lo;
        const double bracket_hi = hi;
        if (gt == 0.0) {
          lo = hi;
        } else if (g_lo == 0.0) {
          hi = lo;
        }
        while (true) {
          const double mid = lo + (hi - lo) / 2;
          if (mid <= lo || mid >= hi) break;
          const double g_mid = g(mid);
          if (g_mid == 0.0) {
            lo = hi = mid;
            break;
          }
          if (SignOf(g_mid) == SignOf(g_lo)) {
            lo = mid;
            g_lo = g_mid;
          } else {
            hi = mid;
          }
        }
        ThetaSolution solution;
        solution.theta = lo + (hi - lo) / 2;
        solution.slem = std::cos(solution.theta);
        solution.bracket_lo = bracket_lo;
        solution.bracket_hi = bracket_hi;

        if (!MatrixA(spec, solution.theta).ok()) {
          return absl::InternalError(absl::StrCat(
              "root ", solution.theta, " for ", spec.DebugString(),
              " lies on a pole of A"));
        }
        solution.residual = std::abs(ReducedRootFunction(spec, solution.theta));
        return solution;
      }
      prev_t = t;
      prev_g = gt;
    }
    interval_lo = pole;
  }
  return absl::InternalError(
      absl::StrCat("no sign change of det A found in (0, pi) for ",
                   spec.DebugString(), " on a grid of ", cells, " cells"));
}

}  // namespace starconsensus
