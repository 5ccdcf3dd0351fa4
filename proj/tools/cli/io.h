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

// File formats of the command-line tool: topology specs, weights files,
// CSV tables and run manifests.

#ifndef STARCONSENSUS_TOOLS_CLI_IO_H_
#define STARCONSENSUS_TOOLS_CLI_IO_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "starconsensus/topology.h"
#include "starconsensus/weights.h"

namespace starconsensus::cli {

using Json = nlohmann::ordered_json;

// Numbers are written with 12 significant digits.
std::string FormatNumber(double value);
// `value` rounded to 12 significant digits, for embedding in JSON.
double RoundForOutput(double value);

// {"m": [...], "n": [...], "K": int}; "K" defaults to 1.
absl::StatusOr<BranchSpec> SpecFromJson(const Json& json);
absl::StatusOr<BranchSpec> ParseSpec(std::string_view text);
Json SpecToJson(const BranchSpec& spec);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view contents);

// A weights file is any JSON object with "weights" (one array per branch
// type, one entry per stratum), optionally "per_edge" and "spec". The JSON
// output of the slem command is a valid weights file.
struct WeightsFile {
  std::optional<BranchSpec> spec;
  StratifiedWeights weights;
};
absl::StatusOr<WeightsFile> ParseWeightsFile(std::string_view text);
Json WeightsToJson(const StratifiedWeights& weights);

// RFC 4180 table: comma separated, CRLF line ends, fields quoted when they
// contain a comma, quote or line break.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void AddRow(std::vector<std::string> row);
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::string Render() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string QuoteCsvField(std::string_view field);

// Compact JSON of a list, e.g. "[1,2,3]", used inside CSV cells.
std::string InlineList(const std::vector<int>& values);

struct RunManifest {
  std::string command;
  std::vector<BranchSpec> inputs;
  std::vector<std::string> schemes;
  std::vector<std::string> outputs;
  std::optional<uint64_t> seed;
  double seconds = 0.0;
  std::vector<std::string> notes;

  Json ToJson() const;
};

// Version string of the tool, embedded in every manifest.
std::string_view ToolVersion();

}  // namespace starconsensus::cli

#endif  // STARCONSENSUS_TOOLS_CLI_IO_H_
