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

// Command-line front end: parses flags, runs one command and writes its
// result together with a run manifest.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_split.h"
#include "cli/commands.h"
#include "cli/io.h"

namespace starconsensus::cli {
namespace {

struct OutputFlags {
  std::string out;
  std::string format;
};

void AddOutputFlags(CLI::App* command, OutputFlags* flags,
                    const std::string& default_format) {
  flags->format = default_format;
  command->add_option("--out", flags->out,
                      "Write the result here; the manifest goes to "
                      "<out>.manifest.json");
  command->add_option("--format", flags->format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status.message() << "\n";
  return static_cast<int>(ExitCodeFor(status));
}

absl::StatusOr<BranchSpec> LoadSpec(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseSpec(*text);
}

absl::StatusOr<WeightsFile> LoadWeights(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseWeightsFile(*text);
}

absl::StatusOr<std::vector<Scheme>> ParseSchemeList(const std::string& list) {
  std::vector<Scheme> schemes;
  for (absl::string_view name : absl::StrSplit(list, ',', absl::SkipEmpty())) {
    absl::StatusOr<Scheme> scheme = ParseScheme(std::string(name));
    if (!scheme.ok()) return scheme.status();
    schemes.push_back(*scheme);
  }
  return schemes;
}

// Writes `result` in the requested format. With --out the manifest is a
// sibling file; on stdout it is embedded in JSON or sent to stderr for CSV.
int Emit(const absl::StatusOr<CommandOutput>& result, const OutputFlags& flags,
         RunManifest manifest,
         std::chrono::steady_clock::time_point start) {
  if (!result.ok()) return Fail(result.status());
  manifest.notes.insert(manifest.notes.end(), result->notes.begin(),
                        result->notes.end());
  const bool json = flags.format == "json";
  if (!flags.out.empty()) {
    manifest.outputs = {flags.out, flags.out + ".manifest.json"};
  }
  manifest.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  const Json manifest_json = manifest.ToJson();

  std::string body;
  if (json) {
    Json document = result->json;
    if (flags.out.empty()) document["manifest"] = manifest_json;
    body = document.dump(2) + "\n";
  } else {
    body = result->csv.Render();
  }
  if (flags.out.empty()) {
    std::cout << body;
    if (!json) std::cerr << manifest_json.dump(2) << "\n";
  } else {
    if (absl::Status s = WriteFile(flags.out, body); !s.ok()) return Fail(s);
    if (absl::Status s = WriteFile(flags.out + ".manifest.json",
                                   manifest_json.dump(2) + "\n");
        !s.ok()) {
      return Fail(s);
    }
  }
  for (const std::string& note : result->notes) {
    std::cerr << "note: " << note << "\n";
  }
  return static_cast<int>(result->exit_code);
}

int Main(int argc, char** argv) {
  CLI::App app{"Optimal consensus weights for star and K-cored star networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ToolVersion()));

  // Each subcommand stores its action here; it runs after parsing succeeds.
  std::function<int()> action;
  const auto start = std::chrono::steady_clock::now();

  // slem
  CLI::App* slem = app.add_subcommand("slem", "SLEM of one weighting scheme");
  std::string slem_spec;
  std::string slem_scheme = "optimal";
  std::string slem_weights;
  OutputFlags slem_out;
  slem->add_option("--spec", slem_spec, "Topology JSON file");
  slem->add_option("--scheme", slem_scheme,
                   "optimal, metropolis, max_degree, best_constant or numeric")
      ->capture_default_str();
  slem->add_option("--weights", slem_weights,
                   "Evaluate this weights file instead of a scheme");
  AddOutputFlags(slem, &slem_out, "json");
  slem->callback([&] {
    action = [&]() -> int {
      SlemRequest request;
      std::optional<BranchSpec> file_spec;
      if (!slem_weights.empty()) {
        absl::StatusOr<WeightsFile> w = LoadWeights(slem_weights);
        if (!w.ok()) return Fail(w.status());
        request.weights = w->weights;
        file_spec = w->spec;
      }
      if (!slem_spec.empty()) {
        absl::StatusOr<BranchSpec> spec = LoadSpec(slem_spec);
        if (!spec.ok()) return Fail(spec.status());
        request.spec = *spec;
      } else if (file_spec) {
        request.spec = *file_spec;
      } else {
        return Fail(absl::InvalidArgumentError(
            "--spec is required unless the weights file embeds a spec"));
      }
      absl::StatusOr<Scheme> scheme = ParseScheme(slem_scheme);
      if (!scheme.ok()) return Fail(scheme.status());
      request.scheme = *scheme;
      RunManifest manifest{.command = "slem", .inputs = {request.spec}};
      manifest.schemes = {request.weights ? "weights_file" : slem_scheme};
      return Emit(RunSlem(request), slem_out, manifest, start);
    };
  });

  // table1
  CLI::App* table1 =
      app.add_subcommand("table1", "Optimal SLEM over the 9 x 6 grid");
  OutputFlags table1_out;
  AddOutputFlags(table1, &table1_out, "csv");
  table1->callback([&] {
    action = [&] {
      return Emit(RunTable1(), table1_out,
                  {.command = "table1", .schemes = {"optimal"}}, start);
    };
  });

  // kmax
  CLI::App* kmax = app.add_subcommand(
      "kmax", "Largest number of center nodes keeping the closed form optimal");
  std::string kmax_spec;
  bool kmax_table = false;
  OutputFlags kmax_out;
  kmax->add_option("--spec", kmax_spec, "Topology JSON file");
  kmax->add_flag("--table2", kmax_table, "K_max over the 9 x 6 grid");
  AddOutputFlags(kmax, &kmax_out, "json");
  kmax->callback([&] {
    action = [&]() -> int {
      if (kmax_table == !kmax_spec.empty()) {
        return Fail(absl::InvalidArgumentError(
            "give exactly one of --spec and --table2"));
      }
      if (kmax_table) {
        return Emit(RunTable2(), kmax_out,
                    {.command = "kmax", .schemes = {"optimal"}}, start);
      }
      absl::StatusOr<BranchSpec> spec = LoadSpec(kmax_spec);
      if (!spec.ok()) return Fail(spec.status());
      return Emit(RunKMax(*spec), kmax_out,
                  {.command = "kmax", .inputs = {*spec}, .schemes = {"optimal"}},
                  start);
    };
  });

  // sweep-k
  CLI::App* sweep = app.add_subcommand(
      "sweep-k", "Closed-form and numeric SLEM over a range of K");
  std::string sweep_spec;
  int k_first = 1;
  int k_last = 1;
  OutputFlags sweep_out;
  sweep->add_option("--spec", sweep_spec, "Topology JSON file")->required();
  sweep->add_option("--k-min", k_first, "First K")->capture_default_str();
  sweep->add_option("--k-max", k_last, "Last K")->required();
  AddOutputFlags(sweep, &sweep_out, "csv");
  sweep->callback([&] {
    action = [&]() -> int {
      absl::StatusOr<BranchSpec> spec = LoadSpec(sweep_spec);
      if (!spec.ok()) return Fail(spec.status());
      SweepRequest request{.spec = *spec, .k_first = k_first, .k_last = k_last};
      return Emit(RunSweepK(request), sweep_out,
                  {.command = "sweep-k",
                   .inputs = {*spec},
                   .schemes = {"optimal", "numeric"}},
                  start);
    };
  });

  // simulate
  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo consensus error traces");
  std::string sim_spec;
  std::string sim_schemes = "optimal,metropolis,max_degree,best_constant";
  SimulationConfig sim_config;
  OutputFlags sim_out;
  simulate->add_option("--spec", sim_spec, "Topology JSON file")->required();
  simulate->add_option("--schemes", sim_schemes, "Comma-separated schemes")
      ->capture_default_str();
  simulate->add_option("--trials", sim_config.trials, "Independent trials")
      ->capture_default_str();
  simulate->add_option("--iterations", sim_config.iterations,
                       "Consensus steps per trial")
      ->capture_default_str();
  simulate->add_option("--seed", sim_config.seed, "Master seed")
      ->capture_default_str();
  simulate->add_option("--threads", sim_config.threads,
                       "Worker threads; results do not depend on it")
      ->capture_default_str();
  AddOutputFlags(simulate, &sim_out, "csv");
  simulate->callback([&] {
    action = [&]() -> int {
      absl::StatusOr<BranchSpec> spec = LoadSpec(sim_spec);
      if (!spec.ok()) return Fail(spec.status());
      absl::StatusOr<std::vector<Scheme>> schemes =
          ParseSchemeList(sim_schemes);
      if (!schemes.ok()) return Fail(schemes.status());
      RunManifest manifest{.command = "simulate",
                           .inputs = {*spec},
                           .seed = sim_config.seed};
      for (Scheme s : *schemes) manifest.schemes.emplace_back(SchemeName(s));
      return Emit(RunSimulate({*spec, *schemes, sim_config}), sim_out,
                  manifest, start);
    };
  });

  // validate
  CLI::App* validate =
      app.add_subcommand("validate", "Run the invariant checks on a topology");
  std::string val_spec;
  std::string val_weights;
  uint64_t val_seed = 0;
  bool skip_optimizer = false;
  OutputFlags val_out;
  validate->add_option("--spec", val_spec, "Topology JSON file");
  validate->add_option("--weights", val_weights,
                       "Also check this weights file");
  validate->add_option("--seed", val_seed, "Seed of the random weight draws")
      ->capture_default_str();
  validate->add_flag("--no-optimizer", skip_optimizer,
                     "Skip the numeric optimizer comparison");
  AddOutputFlags(validate, &val_out, "json");
  validate->callback([&] {
    action = [&]() -> int {
      ValidateRequest request{.seed = val_seed,
                              .run_optimizer = !skip_optimizer};
      std::optional<BranchSpec> file_spec;
      if (!val_weights.empty()) {
        absl::StatusOr<WeightsFile> w = LoadWeights(val_weights);
        if (!w.ok()) return Fail(w.status());
        request.weights = w->weights;
        file_spec = w->spec;
      }
      if (!val_spec.empty()) {
        absl::StatusOr<BranchSpec> spec = LoadSpec(val_spec);
        if (!spec.ok()) return Fail(spec.status());
        request.spec = *spec;
      } else if (file_spec) {
        request.spec = *file_spec;
      } else {
        return Fail(absl::InvalidArgumentError(
            "--spec is required unless the weights file embeds a spec"));
      }
      RunManifest manifest{.command = "validate",
                           .inputs = {request.spec},
                           .seed = val_seed};
      if (request.weights) {
        manifest.schemes = {"weights_file"};
      } else {
        for (Scheme s : kFormulaSchemes) {
          manifest.schemes.emplace_back(SchemeName(s));
        }
      }
      return Emit(RunValidate(request), val_out, manifest, start);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kUsage);
  }
  return action ? action() : static_cast<int>(ExitCode::kUsage);
}

}  // namespace
}  // namespace starconsensus::cli

int main(int argc, char** argv) {
  return starconsensus::cli::Main(argc, argv);
}
