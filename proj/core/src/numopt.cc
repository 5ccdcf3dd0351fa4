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

#include "starconsensus/numopt.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace starconsensus {
namespace {

using Vec = std::vector<double>;

void Clip(Vec& x, double lo, double hi) {
  for (double& v : x) v = std::clamp(v, lo, hi);
}

// Tracks the best exact objective seen across both phases.
class BestTracker {
 public:
  BestTracker(const SlemObjective& objective, bool record)
      : objective_(objective), record_(record) {}

  void Offer(const Vec& x, double value) {
    if (value < best_value_) {
      best_value_ = value;
      best_ = x;
    }
    if (record_) history_.push_back(best_value_);
  }
  void Offer(const Vec& x) { Offer(x, objective_.Value(x)); }

  double value() const { return best_value_; }
  const Vec& point() const { return best_; }
  std::vector<double>& history() { return history_; }

 private:
  const SlemObjective& objective_;
  bool record_;
  double best_value_ = std::numeric_limits<double>::infinity();
  Vec best_;
  std::vector<double> history_;
};

struct StageOutcome {
  int iterations = 0;
  double last_step = 0.0;
};

// Quasi-Newton minimization of f_mu inside the box, starting from x.
StageOutcome MinimizeSmoothed(const SlemObjective& objective, double mu,
                              const OptimizerOptions& options, Vec& x,
                              BestTracker& best) {
  const int d = objective.dimension();
  StageOutcome outcome;
  Vec g;
  double f = objective.Smoothed(x, mu, &g);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(d, d);
  bool h_is_identity = true;
  bool first_update = true;

  for (int it = 0; it < options.refine_iterations_per_stage; ++it) {
    Eigen::Map<const Eigen::VectorXd> grad(g.data(), d);
    if (grad.lpNorm<Eigen::Infinity>() < 1e-14) break;
    Eigen::VectorXd dir = -h * grad;
    if (dir.dot(grad) >= 0) {
      h.setIdentity();
      h_is_identity = true;
      dir = -grad;
    }
    // Largest step that keeps x inside the box.
    double max_alpha = 1.0;
    for (int i = 0; i < d; ++i) {
      if (dir[i] > 0) {
        max_alpha = std::min(max_alpha, (options.upper_bound - x[i]) / dir[i]);
      } else if (dir[i] < 0) {
        max_alpha = std::min(max_alpha, (options.lower_bound - x[i]) / dir[i]);
      }
    }
    const double slope = dir.dot(grad);
    double alpha = std::max(max_alpha, 0.0);
    Vec trial(d);
    Vec trial_g;
    double trial_f = f;
    bool accepted = false;
    for (int halving = 0; halving < 60 && alpha > 0; ++halving) {
      for (int i = 0; i < d; ++i) trial[i] = x[i] + alpha * dir[i];
      Clip(trial, options.lower_bound, options.upper_bound);
      trial_f = objective.Smoothed(trial, mu, &trial_g);
      if (trial_f <= f + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (h_is_identity) break;
      h.setIdentity();
      h_is_identity = true;
      continue;
    }

    Eigen::VectorXd s(d);
    Eigen::VectorXd y(d);
    for (int i = 0; i < d; ++i) {
      s[i] = trial[i] - x[i];
      y[i] = trial_g[i] - g[i];
    }
    const double sy = s.dot(y);
    if (sy > 1e-300) {
      if (first_update) {
        h *= sy / y.dot(y);
        first_update = false;
      }
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
      h = (eye - rho * s * y.transpose()) * h *
              (eye - rho * y * s.transpose()) +
          rho * s * s.transpose();
      h_is_identity = false;
    }

    const double previous = f;
    x = trial;
    g = trial_g;
    f = trial_f;
    ++outcome.iterations;
    outcome.last_step = s.norm();
    best.Offer(x);
    if (previous - f <= 1e-16 * std::max(1.0, std::abs(f)) &&
        outcome.last_step < 1e-14) {
      break;
    }
  }
  return outcome;
}

}  // namespace

SlemObjective::SlemObjective(const StarNetwork& network, double tie_tolerance)
    : node_count_(network.node_count()), tie_tolerance_(tie_tolerance) {
  strata_edges_.resize(network.strata().size());
  for (size_t s = 0; s < network.strata().size(); ++s) {
    for (int e : network.strata()[s].edges) {
      const Edge& edge = network.edges()[e];
      strata_edges_[s].emplace_back(edge.u, edge.v);
    }
  }
}

Eigen::MatrixXd SlemObjective::Matrix(const Vec& weights) const {
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(node_count_, node_count_);
  for (size_t s = 0; s < strata_edges_.size(); ++s) {
    const double ws = weights[s];
    for (const auto& [a, b] : strata_edges_[s]) {
      w(a, b) += ws;
      w(b, a) += ws;
      w(a, a) -= ws;
      w(b, b) -= ws;
    }
  }
  return w;
}

Vec SlemObjective::EigenvalueGradient(
    const Eigen::Ref<const Eigen::VectorXd>& u) const {
  Vec grad(strata_edges_.size(), 0.0);
  for (size_t s = 0; s < strata_edges_.size(); ++s) {
    for (const auto& [a, b] : strata_edges_[s]) {
      const double diff = u[a] - u[b];
      grad[s] -= diff * diff;
    }
  }
  return grad;
}

ObjectiveValue SlemObjective::Evaluate(const Vec& weights) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Matrix(weights));
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const int n = node_count_;

  ObjectiveValue out;
  out.lambda2 = values[n - 2];
  out.lambda_min = values[0];
  out.value = std::max(out.lambda2, -out.lambda_min);
  out.grad_lambda2 = EigenvalueGradient(solver.eigenvectors().col(n - 2));
  out.grad_neg_lambda_min = EigenvalueGradient(solver.eigenvectors().col(0));
  for (double& x : out.grad_neg_lambda_min) x = -x;

  if (std::abs(out.lambda2 + out.lambda_min) <= tie_tolerance_) {
    out.subgradient.resize(weights.size());
    for (size_t s = 0; s < weights.size(); ++s) {
      out.subgradient[s] =
          0.5 * (out.grad_lambda2[s] + out.grad_neg_lambda_min[s]);
    }
  } else if (out.lambda2 > -out.lambda_min) {
    out.subgradient = out.grad_lambda2;
  } else {
    out.subgradient = out.grad_neg_lambda_min;
  }
  return out;
}

double SlemObjective::Value(const Vec& weights) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      Matrix(weights), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& values = solver.eigenvalues();
  return std::max(values[node_count_ - 2], -values[0]);
}

double SlemObjective::Smoothed(const Vec& weights, double mu,
                               Vec* gradient) const {
  const int n = node_count_;
  Eigen::MatrixXd w = Matrix(weights);
  w.array() -= 1.0 / n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(w);
  const Eigen::VectorXd& lambda = solver.eigenvalues();

  const double top = lambda.cwiseAbs().maxCoeff() / mu;
  Eigen::ArrayXd plus = ((lambda.array() / mu) - top).exp();
  Eigen::ArrayXd minus = ((-lambda.array() / mu) - top).exp();
  const double total = plus.sum() + minus.sum();
  const double value = mu * (top + std::log(total));

  if (gradient != nullptr) {
    // d f_mu / d lambda_k = (plus_k - minus_k) / total.
    const Eigen::ArrayXd coeff = (plus - minus) / total;
    const Eigen::MatrixXd& u = solver.eigenvectors();
    gradient->assign(strata_edges_.size(), 0.0);
    for (size_t s = 0; s < strata_edges_.size(); ++s) {
      double acc = 0.0;
      for (const auto& [a, b] : strata_edges_[s]) {
        acc -= ((u.row(a) - u.row(b)).array().square().transpose() * coeff)
                   .sum();
      }
      (*gradient)[s] = acc;
    }
  }
  return value;
}

StratifiedWeights DefaultInitialWeights(const StarNetwork& network) {
  StratifiedWeights init = MetropolisWeights(network);
  init.per_edge.clear();
  init.scheme = Scheme::kNumeric;
  return init;
}

absl::StatusOr<OptimizationResult> OptimizeWeights(
    const StarNetwork& network, const StratifiedWeights& init,
    double tolerance, const OptimizerOptions& options) {
  if (!(tolerance > 0)) {
    return absl::InvalidArgumentError("tolerance must be positive");
  }
  if (network.node_count() < 2) {
    return absl::InvalidArgumentError("network needs at least two nodes");
  }
  StratifiedWeights start = init;
  start.per_edge.clear();
  if (absl::Status status = start.CheckCoverage(network); !status.ok()) {
    return status;
  }
  if (absl::Status status = start.CheckRange(); !status.ok()) return status;

  const SlemObjective objective(network, options.tie_tolerance);
  BestTracker best(objective, options.record_history);
  Vec x = start.Flatten();
  Clip(x, options.lower_bound, options.upper_bound);
  best.Offer(x);

  OptimizationResult result;
  double window_start_best = best.value();
  const int window_begin =
      options.subgradient_iterations - options.subgradient_iterations / 10;
  for (int t = 1; t <= options.subgradient_iterations; ++t) {
    const ObjectiveValue eval = objective.Evaluate(x);
    best.Offer(x, eval.value);
    if (t == window_begin) window_start_best = best.value();
    const double step = options.step_scale / std::sqrt(static_cast<double>(t));
    for (size_t s = 0; s < x.size(); ++s) x[s] -= step * eval.subgradient[s];
    Clip(x, options.lower_bound, options.upper_bound);
    result.final_step = step;
    ++result.iterations;
  }
  best.Offer(x);

  if (options.refine && !options.smoothing_schedule.empty()) {
    Vec point = best.point();
    std::vector<double> stage_best;
    for (double mu : options.smoothing_schedule) {
      const StageOutcome stage =
          MinimizeSmoothed(objective, mu, options, point, best);
      result.iterations += stage.iterations;
      if (stage.iterations > 0) result.final_step = stage.last_step;
      stage_best.push_back(best.value());
    }
    result.converged =
        stage_best.size() >= 2 &&
        stage_best[stage_best.size() - 2] - stage_best.back() <= tolerance;
  } else {
    result.converged = window_start_best - best.value() <= tolerance;
  }

  result.weights = StratifiedWeights::FromFlat(network.spec(), Scheme::kNumeric,
                                               best.point());
  result.slem = best.value();
  result.best_history = std::move(best.history());
  return result;
}

}  // namespace starconsensus
