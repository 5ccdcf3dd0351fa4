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

#include "cli/commands.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "absl/strings/str_cat.h"
#include "starconsensus/blocks.h"
#include "starconsensus/eig_sym.h"
#include "starconsensus/spectral.h"
#include "starconsensus/theta_solver.h"

namespace starconsensus::cli {
namespace {

constexpr double kSpectrumTolerance = 1e-8;
constexpr double kReconstructionTolerance = 1e-12;
constexpr double kEigenvectorTolerance = 1e-10;
constexpr double kReductionTolerance = 1e-10;
constexpr double kOracleSlemTolerance = 1e-3;
constexpr double kOracleWeightTolerance = 5e-3;

Json NumberOrNull(std::optional<double> value) {
  return value ? Json(RoundForOutput(*value)) : Json(nullptr);
}

std::string CellOrEmpty(std::optional<double> value) {
  return value ? FormatNumber(*value) : "";
}

// Largest K in [1, limit] that satisfies the replica condition, or nullopt
// when every K up to `limit` does.
absl::StatusOr<std::optional<int>> KMaxUpTo(const BranchSpec& spec,
                                            int limit) {
  absl::StatusOr<KMaxResult> r = KMax(spec, limit);
  if (r.ok()) return std::optional<int>(r->k_max);
  if (r.status().code() == absl::StatusCode::kResourceExhausted) {
    return std::optional<int>();
  }
  return r.status();
}

absl::StatusOr<StratifiedWeights> ResolveWeights(const StarNetwork& network,
                                                 Scheme scheme,
                                                 double tolerance) {
  if (scheme != Scheme::kNumeric) return WeightsForScheme(network, scheme);
  absl::StatusOr<OptimizationResult> r =
      OptimizeWeights(network, DefaultInitialWeights(network), tolerance);
  if (!r.ok()) return r.status();
  return r->weights;
}

absl::StatusOr<double> SlemOf(const StarNetwork& network,
                              const StratifiedWeights& weights) {
  absl::StatusOr<WeightMatrix> matrix = AssembleWeightMatrix(network, weights);
  if (!matrix.ok()) return matrix.status();
  return Slem(*matrix);
}

// Pass/fail/skip record of one validate check.
struct Check {
  std::string name;
  std::string status;
  std::string detail;
};

Check Pass(std::string name, std::string detail) {
  return {std::move(name), "pass", std::move(detail)};
}
Check Fail(std::string name, std::string detail) {
  return {std::move(name), "fail", std::move(detail)};
}
Check Skip(std::string name, std::string reason) {
  return {std::move(name), "skip", std::move(reason)};
}
Check Verdict(std::string name, bool ok, std::string detail) {
  return ok ? Pass(std::move(name), std::move(detail))
            : Fail(std::move(name), std::move(detail));
}
Check Error(std::string name, const absl::Status& status) {
  return Fail(std::move(name), std::string(status.message()));
}

StratifiedWeights RandomStratumWeights(const BranchSpec& spec,
                                       std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 0.5);
  StratifiedWeights w;
  w.scheme = Scheme::kNumeric;
  for (int m : spec.lengths) {
    std::vector<double> type(m);
    for (double& x : type) x = u(rng);
    w.by_stratum.push_back(std::move(type));
  }
  return w;
}

Check CheckSpectrumUnion(const StarNetwork& network,
                         const std::vector<StratifiedWeights>& draws) {
  if (network.spec().cores != 1) return Skip("spectrum_union", "K = 1 required");
  double worst = 0.0;
  for (const StratifiedWeights& w : draws) {
    absl::StatusOr<BlockDecomposition> blocks = BuildBlocks(network.spec(), w);
    if (!blocks.ok()) return Error("spectrum_union", blocks.status());
    absl::StatusOr<WeightMatrix> full = AssembleWeightMatrix(network, w);
    if (!full.ok()) return Error("spectrum_union", full.status());
    absl::StatusOr<Eigen::VectorXd> eig = EigenvaluesSym(full->matrix());
    if (!eig.ok()) return Error("spectrum_union", eig.status());
    double diff = 0.0;
    SpectraMatch({eig->begin(), eig->end()}, blocks->ImpliedSpectrum(),
                 kSpectrumTolerance, &diff);
    worst = std::max(worst, diff);
  }
  return Verdict("spectrum_union", worst <= kSpectrumTolerance,
                 absl::StrCat(draws.size(), " weight sets, max eigenvalue gap ",
                              FormatNumber(worst)));
}

Check CheckInterlacingAll(const BranchSpec& spec,
                          const std::vector<StratifiedWeights>& draws) {
  if (spec.cores != 1) return Skip("interlacing", "K = 1 required");
  for (const StratifiedWeights& w : draws) {
    absl::StatusOr<BlockDecomposition> blocks = BuildBlocks(spec, w);
    if (!blocks.ok()) return Error("interlacing", blocks.status());
    absl::StatusOr<InterlacingReport> r = CheckInterlacing(*blocks);
    if (r.status().code() == absl::StatusCode::kFailedPrecondition) {
      return Skip("interlacing", std::string(r.status().message()));
    }
    if (!r.ok()) return Error("interlacing", r.status());
    if (!r->interlacing_holds) {
      return Fail("interlacing",
                  absl::StrCat("violated at j = ", r->first_violation,
                               " by ", FormatNumber(r->max_violation)));
    }
  }
  return Pass("interlacing", absl::StrCat(draws.size(), " weight sets"));
}

Check CheckEigenvalueCoincidence(const BranchSpec& spec,
                                 const StratifiedWeights& optimal,
                                 double slem) {
  const std::string name = "optimal_eigenvalue_coincidence";
  if (spec.cores != 1) return Skip(name, "K = 1 required");
  absl::StatusOr<BlockDecomposition> blocks = BuildBlocks(spec, optimal);
  if (!blocks.ok()) return Error(name, blocks.status());
  absl::StatusOr<Eigen::VectorXd> w0 = EigenvaluesSym(blocks->w0);
  if (!w0.ok()) return Error(name, w0.status());
  absl::StatusOr<Eigen::VectorXd> w0_prime = EigenvaluesSym(blocks->w0_prime);
  if (!w0_prime.ok()) return Error(name, w0_prime.status());
  double gap = std::abs(-(*w0)[w0->size() - 1] - slem);
  if (w0_prime->size() > 0) {
    gap = std::max(gap, std::abs((*w0_prime)[0] - slem));
  }
  // With one branch type W_0 has no eigenvalue at +cos(theta); only the
  // other two coincide.
  if (spec.num_types() >= 2) {
    gap = std::max(gap, std::abs((*w0)[1] - slem));
  }
  return Verdict(name, gap <= kSpectrumTolerance,
                 absl::StrCat("max deviation from cos(theta) ",
                              FormatNumber(gap)));
}

Check CheckRankOne(const BranchSpec& spec,
                   const std::vector<StratifiedWeights>& draws) {
  if (spec.cores != 1) return Skip("rank_one_reconstruction", "K = 1 required");
  absl::StatusOr<RankOneBasis> basis = BuildAlphaBeta(spec);
  if (!basis.ok()) return Error("rank_one_reconstruction", basis.status());
  double worst = 0.0;
  for (const StratifiedWeights& w : draws) {
    absl::StatusOr<BlockDecomposition> blocks = BuildBlocks(spec, w);
    if (!blocks.ok()) return Error("rank_one_reconstruction", blocks.status());
    worst = std::max(worst, (RankOneExpansion(basis->beta, w) - blocks->w0)
                                .cwiseAbs()
                                .maxCoeff());
    worst = std::max(worst,
                     (RankOneExpansion(basis->alpha, w) - blocks->w0_prime)
                         .cwiseAbs()
                         .maxCoeff());
  }
  return Verdict("rank_one_reconstruction", worst <= kReconstructionTolerance,
                 absl::StrCat("max entry error ", FormatNumber(worst)));
}

Check CheckConsensusVector(const BranchSpec& spec,
                           const std::vector<StratifiedWeights>& draws) {
  if (spec.cores != 1) return Skip("consensus_eigenvector", "K = 1 required");
  const Eigen::VectorXd v = ConsensusEigenvector(spec);
  double worst = 0.0;
  for (const StratifiedWeights& w : draws) {
    absl::StatusOr<BlockDecomposition> blocks = BuildBlocks(spec, w);
    if (!blocks.ok()) return Error("consensus_eigenvector", blocks.status());
    worst = std::max(worst, (blocks->w0 * v - v).cwiseAbs().maxCoeff());
  }
  return Verdict("consensus_eigenvector", worst <= kEigenvectorTolerance,
                 absl::StrCat("max |W0 v - v| ", FormatNumber(worst)));
}

Check CheckRootReduction(const BranchSpec& spec, double theta) {
  absl::StatusOr<std::vector<std::vector<double>>> a = MatrixA(spec, theta);
  if (!a.ok()) return Error("root_reduction", a.status());
  if (spec.num_types() == 1) {
    const double m = spec.lengths[0];
    const double n = spec.counts[0];
    const double k = spec.cores;
    // Single-type condition, written for any K by replacing n with n / K.
    const double lhs = (n / k - 2) * std::cos((m - 0.5) * theta);
    const double rhs = (n / k + 2) * std::cos((m + 0.5) * theta);
    const double err = std::abs(lhs - rhs);
    return Verdict("root_reduction", err <= kReductionTolerance,
                   absl::StrCat("single-type residual ", FormatNumber(err)));
  }
  if (spec.num_types() == 2) {
    const double err = std::abs((*a)[0][0] * (*a)[1][1] - 1.0);
    return Verdict("root_reduction", err <= kReductionTolerance,
                   absl::StrCat("two-type residual ", FormatNumber(err)));
  }
  return Skip("root_reduction", "closed reductions exist for B = 1 and B = 2");
}

Check CheckDeterminantIdentity(const BranchSpec& spec) {
  double worst = 0.0;
  int points = 0;
  const int grid = 997;
  for (int g = 1; g < grid; ++g) {
    const double theta = std::numbers::pi * g / grid;
    absl::StatusOr<std::vector<std::vector<double>>> a = MatrixA(spec, theta);
    if (!a.ok()) continue;
    double scale = 1.0;
    for (const auto& row : *a) {
      double norm2 = 0.0;
      for (double x : row) norm2 += x * x;
      scale *= std::sqrt(norm2);
    }
    if (scale > 1e8) continue;
    absl::StatusOr<double> direct = DetA(spec, theta);
    absl::StatusOr<double> reduced = DetAReduced(spec, theta);
    if (!direct.ok() || !reduced.ok()) continue;
    worst = std::max(worst, std::abs(*direct - *reduced) / scale);
    ++points;
  }
  return Verdict("determinant_identity", worst <= 1e-10 && points > 0,
                 absl::StrCat(points, " grid points, max relative gap ",
                              FormatNumber(worst)));
}

}  // namespace

ExitCode ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return ExitCode::kOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kPermissionDenied:
      return ExitCode::kUsage;
    case absl::StatusCode::kOutOfRange:
      return ExitCode::kValidation;
    default:
      return ExitCode::kNumerical;
  }
}

const std::vector<std::vector<int>>& GridLengths() {
  static const auto* rows = new std::vector<std::vector<int>>{
      {3, 2, 1}, {4, 2, 1}, {4, 3, 1}, {4, 3, 2}, {5, 3, 1},
      {5, 3, 2}, {5, 4, 1}, {5, 4, 2}, {5, 4, 3}};
  return *rows;
}

const std::vector<std::vector<int>>& GridCounts() {
  static const auto* cols = new std::vector<std::vector<int>>{
      {1, 2, 3}, {3, 2, 1}, {3, 1, 2}, {1, 3, 2}, {2, 3, 1}, {2, 1, 3}};
  return *cols;
}

std::vector<std::string> ClosedFormNotes(const BranchSpec& spec) {
  std::vector<std::string> notes;
  if (!spec.AllCountsAtLeastTwo()) {
    notes.push_back(
        "some n_p = 1: cos(theta) is the SLEM of the closed-form weights, "
        "but the numeric stratified optimum can be lower");
  }
  if (spec.cores > 1) {
    absl::StatusOr<std::optional<int>> k_max = KMaxUpTo(spec, spec.cores);
    if (k_max.ok() && k_max->has_value()) {
      notes.push_back(absl::StrCat(
          "K = ", spec.cores, " exceeds K_max = ", **k_max,
          ": the replica eigenvalue dominates and the closed form is not "
          "optimal"));
    }
  }
  return notes;
}

absl::StatusOr<CommandOutput> RunSlem(const SlemRequest& request) {
  absl::StatusOr<StarNetwork> network = StarNetwork::Build(request.spec);
  if (!network.ok()) return network.status();

  StratifiedWeights weights;
  if (request.weights) {
    weights = *request.weights;
    if (absl::Status s = weights.CheckCoverage(*network); !s.ok()) return s;
    if (absl::Status s = weights.CheckRange(); !s.ok()) return s;
  } else {
    absl::StatusOr<StratifiedWeights> w =
        ResolveWeights(*network, request.scheme, request.tolerance);
    if (!w.ok()) return w.status();
    weights = *std::move(w);
  }
  absl::StatusOr<double> slem = SlemOf(*network, weights);
  if (!slem.ok()) return slem.status();

  std::optional<double> theta;
  CommandOutput out;
  if (!request.weights && request.scheme == Scheme::kOptimal) {
    absl::StatusOr<ThetaSolution> s = SolveTheta(request.spec);
    if (!s.ok()) return s.status();
    theta = s->theta;
    out.notes = ClosedFormNotes(request.spec);
  }
  const std::string scheme(SchemeName(weights.scheme));

  out.json = Json{{"spec", SpecToJson(request.spec)},
                  {"scheme", scheme},
                  {"slem", RoundForOutput(*slem)},
                  {"theta", NumberOrNull(theta)},
                  {"weights", WeightsToJson(weights)}};
  if (weights.has_per_edge()) {
    Json per_edge = Json::array();
    for (double w : weights.per_edge) per_edge.push_back(RoundForOutput(w));
    out.json["per_edge"] = std::move(per_edge);
  }
  out.csv = CsvTable({"m", "n", "K", "scheme", "slem", "theta", "weights"});
  out.csv.AddRow({InlineList(request.spec.lengths),
                  InlineList(request.spec.counts),
                  absl::StrCat(request.spec.cores), scheme,
                  FormatNumber(*slem), CellOrEmpty(theta),
                  WeightsToJson(weights).dump()});
  return out;
}

absl::StatusOr<CommandOutput> RunTable1() {
  CommandOutput out;
  std::vector<std::string> header = {"m"};
  Json columns = Json::array();
  for (const auto& n : GridCounts()) {
    header.push_back(absl::StrCat("n=", InlineList(n)));
    columns.push_back(n);
  }
  out.csv = CsvTable(header);
  Json rows = Json::array();
  Json values = Json::array();
  for (const auto& m : GridLengths()) {
    std::vector<std::string> row = {InlineList(m)};
    Json value_row = Json::array();
    for (const auto& n : GridCounts()) {
      absl::StatusOr<ThetaSolution> s = SolveTheta({m, n, 1});
      if (!s.ok()) return s.status();
      row.push_back(FormatNumber(s->slem));
      value_row.push_back(RoundForOutput(s->slem));
    }
    out.csv.AddRow(std::move(row));
    rows.push_back(m);
    values.push_back(std::move(value_row));
  }
  out.json = Json{{"rows_m", std::move(rows)},
                  {"columns_n", std::move(columns)},
                  {"slem", std::move(values)}};
  return out;
}

absl::StatusOr<CommandOutput> RunKMax(const BranchSpec& spec) {
  absl::StatusOr<KMaxResult> r = KMax(spec);
  if (!r.ok()) return r.status();
  BranchSpec single = spec;
  single.cores = 1;
  CommandOutput out;
  if (spec.cores != 1) {
    out.notes.push_back("K in the spec is ignored; the search starts at K = 1");
  }
  out.json = Json{{"spec", SpecToJson(single)},
                  {"k_max", r->k_max},
                  {"replica_at_k_max", RoundForOutput(r->replica_at_max)},
                  {"slem_at_k_max", RoundForOutput(r->slem_at_max)},
                  {"replica_after", RoundForOutput(r->replica_after)},
                  {"slem_after", RoundForOutput(r->slem_after)}};
  out.csv = CsvTable({"m", "n", "k_max", "replica_at_k_max", "slem_at_k_max",
                      "replica_after", "slem_after"});
  out.csv.AddRow({InlineList(spec.lengths), InlineList(spec.counts),
                  absl::StrCat(r->k_max), FormatNumber(r->replica_at_max),
                  FormatNumber(r->slem_at_max), FormatNumber(r->replica_after),
                  FormatNumber(r->slem_after)});
  return out;
}

absl::StatusOr<CommandOutput> RunTable2() {
  CommandOutput out;
  std::vector<std::string> header = {"m"};
  Json columns = Json::array();
  for (const auto& n : GridCounts()) {
    header.push_back(absl::StrCat("n=", InlineList(n)));
    columns.push_back(n);
  }
  out.csv = CsvTable(header);
  Json rows = Json::array();
  Json values = Json::array();
  for (const auto& m : GridLengths()) {
    std::vector<std::string> row = {InlineList(m)};
    Json value_row = Json::array();
    for (const auto& n : GridCounts()) {
      absl::StatusOr<KMaxResult> r = KMax({m, n, 1});
      if (!r.ok()) return r.status();
      row.push_back(absl::StrCat(r->k_max));
      value_row.push_back(r->k_max);
    }
    out.csv.AddRow(std::move(row));
    rows.push_back(m);
    values.push_back(std::move(value_row));
  }
  out.json = Json{{"rows_m", std::move(rows)},
                  {"columns_n", std::move(columns)},
                  {"k_max", std::move(values)}};
  return out;
}

absl::StatusOr<CommandOutput> RunSweepK(const SweepRequest& request) {
  if (request.k_first < 1 || request.k_last < request.k_first) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid K range [", request.k_first, ", ",
                     request.k_last, "]"));
  }
  BranchSpec spec = request.spec;
  spec.cores = 1;
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  absl::StatusOr<std::optional<int>> k_max = KMaxUpTo(spec, request.k_last);
  if (!k_max.ok()) return k_max.status();
  auto within = [&](int k) { return !k_max->has_value() || k <= **k_max; };

  CommandOutput out;
  out.csv = CsvTable({"K", "within_k_max", "slem_closed_form", "slem_numeric",
                      "numeric_converged", "closed_minus_numeric",
                      "max_weight_deviation"});
  Json rows = Json::array();
  double best = std::numeric_limits<double>::infinity();
  int best_k = 0;
  for (int k = request.k_first; k <= request.k_last; ++k) {
    spec.cores = k;
    absl::StatusOr<StarNetwork> network = StarNetwork::Build(spec);
    if (!network.ok()) return network.status();
    absl::StatusOr<OptimizationResult> numeric =
        OptimizeWeights(*network, DefaultInitialWeights(*network),
                        request.tolerance, request.options);
    if (!numeric.ok()) return numeric.status();

    std::optional<double> closed;
    std::optional<double> gap;
    std::optional<double> deviation;
    if (within(k)) {
      absl::StatusOr<ThetaSolution> s = SolveTheta(spec);
      if (!s.ok()) return s.status();
      absl::StatusOr<StratifiedWeights> w = OptimalWeights(spec, *s);
      if (!w.ok()) return w.status();
      closed = s->slem;
      gap = s->slem - numeric->slem;
      const std::vector<double> a = w->Flatten();
      const std::vector<double> b = numeric->weights.Flatten();
      double worst = 0.0;
      for (size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
      }
      deviation = worst;
    }
    if (numeric->slem < best) {
      best = numeric->slem;
      best_k = k;
    }
    if (!numeric->converged) {
      out.notes.push_back(absl::StrCat("optimizer did not converge at K = ", k));
    }
    out.csv.AddRow({absl::StrCat(k), within(k) ? "true" : "false",
                    CellOrEmpty(closed), FormatNumber(numeric->slem),
                    numeric->converged ? "true" : "false", CellOrEmpty(gap),
                    CellOrEmpty(deviation)});
    rows.push_back(Json{{"K", k},
                        {"within_k_max", within(k)},
                        {"slem_closed_form", NumberOrNull(closed)},
                        {"slem_numeric", RoundForOutput(numeric->slem)},
                        {"numeric_converged", numeric->converged},
                        {"closed_minus_numeric", NumberOrNull(gap)},
                        {"max_weight_deviation", NumberOrNull(deviation)}});
  }
  spec.cores = 1;
  out.json = Json{{"spec", SpecToJson(spec)},
                  {"k_max", k_max->has_value() ? Json(**k_max) : Json(nullptr)},
                  {"argmin_numeric_k", best_k},
                  {"min_numeric_slem", RoundForOutput(best)},
                  {"rows", std::move(rows)}};
  if (!spec.AllCountsAtLeastTwo()) {
    out.notes.push_back(
        "some n_p = 1: the closed form can exceed the numeric optimum");
  }
  return out;
}

absl::StatusOr<CommandOutput> RunSimulate(const SimulateRequest& request) {
  if (request.schemes.empty()) {
    return absl::InvalidArgumentError("at least one scheme is required");
  }
  absl::StatusOr<StarNetwork> network = StarNetwork::Build(request.spec);
  if (!network.ok()) return network.status();

  CommandOutput out;
  std::vector<std::string> header = {"t"};
  std::vector<ConvergenceTrace> traces;
  Json schemes = Json::array();
  for (Scheme scheme : request.schemes) {
    absl::StatusOr<StratifiedWeights> w =
        ResolveWeights(*network, scheme, 1e-6);
    if (!w.ok()) return w.status();
    absl::StatusOr<WeightMatrix> matrix = AssembleWeightMatrix(*network, *w);
    if (!matrix.ok()) return matrix.status();
    absl::StatusOr<double> slem = Slem(*matrix);
    if (!slem.ok()) return slem.status();
    absl::StatusOr<ConvergenceTrace> trace = RunTrials(*matrix, request.config);
    if (!trace.ok()) return trace.status();

    const std::string name(SchemeName(scheme));
    header.push_back(absl::StrCat("e_", name));
    Json entry{{"scheme", name}, {"slem", RoundForOutput(*slem)}};
    if (request.config.iterations >= 3) {
      const double slope = FitTailLogSlope(trace->mean_error);
      entry["fitted_log_slope"] = RoundForOutput(slope);
      entry["log_slem"] = RoundForOutput(std::log(*slem));
    }
    Json values = Json::array();
    for (double e : trace->mean_error) values.push_back(RoundForOutput(e));
    entry["mean_error"] = std::move(values);
    if (!trace->warning.empty()) {
      entry["warning"] = trace->warning;
      out.notes.push_back(absl::StrCat(name, ": ", trace->warning));
    }
    schemes.push_back(std::move(entry));
    traces.push_back(*std::move(trace));
  }
  out.csv = CsvTable(header);
  for (int t = 0; t <= request.config.iterations; ++t) {
    std::vector<std::string> row = {absl::StrCat(t)};
    for (const ConvergenceTrace& trace : traces) {
      row.push_back(FormatNumber(trace.mean_error[t]));
    }
    out.csv.AddRow(std::move(row));
  }
  out.json = Json{{"spec", SpecToJson(request.spec)},
                  {"trials", request.config.trials},
                  {"iterations", request.config.iterations},
                  {"seed", request.config.seed},
                  {"schemes", std::move(schemes)}};
  return out;
}

absl::StatusOr<CommandOutput> RunValidate(const ValidateRequest& request) {
  const BranchSpec& spec = request.spec;
  absl::StatusOr<StarNetwork> network = StarNetwork::Build(spec);
  if (!network.ok()) return network.status();

  std::vector<Check> checks;
  std::vector<StratifiedWeights> draws;
  std::mt19937_64 rng(request.seed);
  for (int i = 0; i < request.random_draws; ++i) {
    draws.push_back(RandomStratumWeights(spec, rng));
  }

  // Supplied weights are range-checked first and then treated as one more
  // weight set for the structural checks.
  if (request.weights) {
    const StratifiedWeights& w = *request.weights;
    absl::Status coverage = w.CheckCoverage(*network);
    absl::Status range = coverage.ok() ? w.CheckRange() : coverage;
    checks.push_back(range.ok() ? Pass("weights_range", "all weights in (0, 1)")
                                : Error("weights_range", range));
    if (range.ok()) {
      absl::StatusOr<WeightMatrix> matrix = AssembleWeightMatrix(*network, w);
      if (!matrix.ok()) return matrix.status();
      absl::StatusOr<ConsensusConditions> c =
          CheckConsensusConditions(*network, *matrix);
      if (!c.ok()) return c.status();
      checks.push_back(Verdict("consensus_conditions[weights_file]", c->ok(),
                               c->DebugString()));
      if (!w.has_per_edge()) draws.push_back(w);
    }
  } else {
    for (Scheme scheme : kFormulaSchemes) {
      const std::string name =
          absl::StrCat("consensus_conditions[", std::string(SchemeName(scheme)), "]");
      absl::StatusOr<StratifiedWeights> w = WeightsForScheme(*network, scheme);
      if (!w.ok()) {
        checks.push_back(Error(name, w.status()));
        continue;
      }
      absl::StatusOr<WeightMatrix> matrix = AssembleWeightMatrix(*network, *w);
      if (!matrix.ok()) return matrix.status();
      absl::StatusOr<ConsensusConditions> c =
          CheckConsensusConditions(*network, *matrix);
      if (!c.ok()) return c.status();
      checks.push_back(Verdict(name, c->ok(), c->DebugString()));
    }
  }

  checks.push_back(CheckSpectrumUnion(*network, draws));
  checks.push_back(CheckInterlacingAll(spec, draws));
  checks.push_back(CheckRankOne(spec, draws));
  checks.push_back(CheckConsensusVector(spec, draws));
  checks.push_back(CheckDeterminantIdentity(spec));

  absl::StatusOr<ThetaSolution> theta = SolveTheta(spec);
  if (!theta.ok()) return theta.status();
  checks.push_back(CheckRootReduction(spec, theta->theta));

  absl::StatusOr<std::optional<int>> k_max = KMaxUpTo(spec, spec.cores);
  if (!k_max.ok()) return k_max.status();
  const bool closed_form_valid = !k_max->has_value();
  absl::StatusOr<StratifiedWeights> optimal = OptimalWeights(spec, *theta);
  if (!optimal.ok()) return optimal.status();
  if (closed_form_valid) {
    absl::StatusOr<double> slem = SlemOf(*network, *optimal);
    if (!slem.ok()) return slem.status();
    const double gap = std::abs(*slem - theta->slem);
    checks.push_back(Verdict("slem_equals_cos_theta", gap <= kSpectrumTolerance,
                             absl::StrCat("|slem - cos(theta)| = ",
                                          FormatNumber(gap))));
  } else {
    checks.push_back(Skip("slem_equals_cos_theta", "K > K_max"));
  }
  checks.push_back(
      CheckEigenvalueCoincidence(spec, *optimal, theta->slem));

  if (!request.run_optimizer) {
    checks.push_back(Skip("oracle_equivalence", "disabled"));
  } else if (!spec.AllCountsAtLeastTwo()) {
    checks.push_back(Skip("oracle_equivalence", "n_p >= 2 required"));
  } else if (!closed_form_valid) {
    checks.push_back(Skip("oracle_equivalence", "K > K_max"));
  } else {
    absl::StatusOr<OptimizationResult> numeric =
        OptimizeWeights(*network, DefaultInitialWeights(*network), 1e-6);
    if (!numeric.ok()) return numeric.status();
    const std::vector<double> a = optimal->Flatten();
    const std::vector<double> b = numeric->weights.Flatten();
    double deviation = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
      deviation = std::max(deviation, std::abs(a[i] - b[i]));
    }
    const double gap = std::abs(numeric->slem - theta->slem);
    checks.push_back(Verdict(
        "oracle_equivalence",
        gap <= kOracleSlemTolerance && deviation <= kOracleWeightTolerance,
        absl::StrCat("slem gap ", FormatNumber(gap), ", max weight deviation ",
                     FormatNumber(deviation))));
  }

  CommandOutput out;
  out.csv = CsvTable({"check", "status", "detail"});
  Json items = Json::array();
  bool passed = true;
  for (const Check& c : checks) {
    out.csv.AddRow({c.name, c.status, c.detail});
    items.push_back(
        Json{{"check", c.name}, {"status", c.status}, {"detail", c.detail}});
    passed = passed && c.status != "fail";
  }
  out.json = Json{{"spec", SpecToJson(spec)},
                  {"passed", passed},
                  {"checks", std::move(items)}};
  out.notes = ClosedFormNotes(spec);
  if (!passed) out.exit_code = ExitCode::kValidation;
  return out;
}

}  // namespace starconsensus::cli
