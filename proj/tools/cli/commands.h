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

// Commands of the starconsensus tool. Each command returns its result as a
// JSON document plus an equivalent CSV table; the binary only parses flags
// and writes files.

#ifndef STARCONSENSUS_TOOLS_CLI_COMMANDS_H_
#define STARCONSENSUS_TOOLS_CLI_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cli/io.h"
#include "starconsensus/numopt.h"
#include "starconsensus/simulation.h"
#include "starconsensus/topology.h"
#include "starconsensus/weights.h"

namespace starconsensus::cli {

enum class ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNumerical = 2,
  kValidation = 3,
};

// InvalidArgument and NotFound are usage errors, OutOfRange (weights
// outside (0, 1)) is a validation failure, anything else is numerical.
ExitCode ExitCodeFor(const absl::Status& status);

struct CommandOutput {
  Json json;
  CsvTable csv{{}};
  // Caveats about the inputs, copied into the manifest.
  std::vector<std::string> notes;
  // kOk, or kValidation when a validate run found failures.
  ExitCode exit_code = ExitCode::kOk;
};

// Row and column labels shared by the SLEM and K_max grids.
const std::vector<std::vector<int>>& GridLengths();
const std::vector<std::vector<int>>& GridCounts();

// Caveats for using the closed form on `spec`: some n_p = 1, or K > K_max.
std::vector<std::string> ClosedFormNotes(const BranchSpec& spec);

struct SlemRequest {
  BranchSpec spec;
  Scheme scheme = Scheme::kOptimal;
  // When set, these weights are evaluated instead of `scheme`.
  std::optional<StratifiedWeights> weights;
  double tolerance = 1e-6;  // numeric scheme only
};
absl::StatusOr<CommandOutput> RunSlem(const SlemRequest& request);

absl::StatusOr<CommandOutput> RunTable1();

absl::StatusOr<CommandOutput> RunKMax(const BranchSpec& spec);
absl::StatusOr<CommandOutput> RunTable2();

struct SweepRequest {
  BranchSpec spec;
  int k_first = 1;
  int k_last = 1;
  double tolerance = 1e-6;
  OptimizerOptions options;
};
absl::StatusOr<CommandOutput> RunSweepK(const SweepRequest& request);

struct SimulateRequest {
  BranchSpec spec;
  std::vector<Scheme> schemes;
  SimulationConfig config;
};
absl::StatusOr<CommandOutput> RunSimulate(const SimulateRequest& request);

struct ValidateRequest {
  BranchSpec spec;
  std::optional<StratifiedWeights> weights;
  uint64_t seed = 0;
  int random_draws = 20;
  // The numeric optimizer check takes seconds; it can be turned off.
  bool run_optimizer = true;
};
absl::StatusOr<CommandOutput> RunValidate(const ValidateRequest& request);

}  // namespace starconsensus::cli

#endif  // STARCONSENSUS_TOOLS_CLI_COMMANDS_H_
