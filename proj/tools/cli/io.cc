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

#include "cli/io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

#ifndef STARCONSENSUS_VERSION
#define STARCONSENSUS_VERSION "unknown"
#endif

namespace starconsensus::cli {
namespace {

absl::StatusOr<std::vector<int>> IntArray(const Json& json, const char* key) {
  if (!json.contains(key)) {
    return absl::InvalidArgumentError(absl::StrCat("missing \"", key, "\""));
  }
  const Json& value = json.at(key);
  if (!value.is_array()) {
    return absl::InvalidArgumentError(
        absl::StrCat("\"", key, "\" must be an array of integers"));
  }
  std::vector<int> out;
  for (const Json& x : value) {
    if (!x.is_number_integer()) {
      return absl::InvalidArgumentError(
          absl::StrCat("\"", key, "\" must contain only integers"));
    }
    out.push_back(x.get<int>());
  }
  return out;
}

absl::StatusOr<std::vector<double>> NumberArray(const Json& json,
                                                std::string_view what) {
  if (!json.is_array()) {
    return absl::InvalidArgumentError(
        absl::StrCat(std::string(what), " must be an array of numbers"));
  }
  std::vector<double> out;
  for (const Json& x : json) {
    if (!x.is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat(std::string(what), " must contain only numbers"));
    }
    out.push_back(x.get<double>());
  }
  return out;
}

absl::StatusOr<Json> ParseJson(std::string_view text) {
  Json json = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded()) {
    return absl::InvalidArgumentError("malformed JSON");
  }
  if (!json.is_object()) {
    return absl::InvalidArgumentError("expected a JSON object");
  }
  return json;
}

}  // namespace

std::string FormatNumber(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

double RoundForOutput(double value) {
  if (!std::isfinite(value)) return value;
  return std::stod(FormatNumber(value));
}

absl::StatusOr<BranchSpec> SpecFromJson(const Json& json) {
  if (!json.is_object()) {
    return absl::InvalidArgumentError("spec must be a JSON object");
  }
  BranchSpec spec;
  absl::StatusOr<std::vector<int>> m = IntArray(json, "m");
  if (!m.ok()) return m.status();
  absl::StatusOr<std::vector<int>> n = IntArray(json, "n");
  if (!n.ok()) return n.status();
  spec.lengths = *std::move(m);
  spec.counts = *std::move(n);
  if (json.contains("K")) {
    if (!json.at("K").is_number_integer()) {
      return absl::InvalidArgumentError("\"K\" must be an integer");
    }
    spec.cores = json.at("K").get<int>();
  }
  if (absl::Status status = spec.Validate(); !status.ok()) return status;
  return spec;
}

absl::StatusOr<BranchSpec> ParseSpec(std::string_view text) {
  absl::StatusOr<Json> json = ParseJson(text);
  if (!json.ok()) return json.status();
  return SpecFromJson(*json);
}

Json SpecToJson(const BranchSpec& spec) {
  return Json{{"m", spec.lengths}, {"n", spec.counts}, {"K", spec.cores}};
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << contents;
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<WeightsFile> ParseWeightsFile(std::string_view text) {
  absl::StatusOr<Json> json = ParseJson(text);
  if (!json.ok()) return json.status();
  WeightsFile file;
  if (json->contains("spec")) {
    absl::StatusOr<BranchSpec> spec = SpecFromJson(json->at("spec"));
    if (!spec.ok()) return spec.status();
    file.spec = *spec;
  }
  if (!json->contains("weights") || !json->at("weights").is_array()) {
    return absl::InvalidArgumentError(
        "weights file needs \"weights\": one array per branch type");
  }
  file.weights.scheme = Scheme::kNumeric;
  if (json->contains("scheme") && json->at("scheme").is_string()) {
    absl::StatusOr<Scheme> scheme =
        ParseScheme(json->at("scheme").get<std::string>());
    if (scheme.ok()) file.weights.scheme = *scheme;
  }
  for (const Json& type : json->at("weights")) {
    absl::StatusOr<std::vector<double>> row = NumberArray(type, "weights row");
    if (!row.ok()) return row.status();
    file.weights.by_stratum.push_back(*std::move(row));
  }
  if (json->contains("per_edge") && !json->at("per_edge").is_null()) {
    absl::StatusOr<std::vector<double>> per_edge =
        NumberArray(json->at("per_edge"), "\"per_edge\"");
    if (!per_edge.ok()) return per_edge.status();
    file.weights.per_edge = *std::move(per_edge);
  }
  return file;
}

Json WeightsToJson(const StratifiedWeights& weights) {
  Json rows = Json::array();
  for (const auto& type : weights.by_stratum) {
    Json row = Json::array();
    for (double w : type) row.push_back(RoundForOutput(w));
    rows.push_back(std::move(row));
  }
  return rows;
}

CsvTable::CsvTable(std::vector<std::string> header)
    : header_(std::move(header)) {}

void CsvTable::AddRow(std::vector<std::string> row) {
  row.resize(header_.size());
  rows_.push_back(std::move(row));
}

std::string QuoteCsvField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string CsvTable::Render() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += QuoteCsvField(row[i]);
    }
    out += "\r\n";
  };
  emit(header_);
  for (const auto& row : rows_) emit(row);
  return out;
}

std::string InlineList(const std::vector<int>& values) {
  return absl::StrCat("[", absl::StrJoin(values, ","), "]");
}

Json RunManifest::ToJson() const {
  Json inputs_json = Json::array();
  for (const BranchSpec& spec : inputs) inputs_json.push_back(SpecToJson(spec));
  Json json{{"command", command},
            {"inputs", std::move(inputs_json)},
            {"schemes", schemes},
            {"outputs", outputs},
            {"tool_version", std::string(ToolVersion())},
            {"seed", seed ? Json(*seed) : Json(nullptr)},
            {"seconds", RoundForOutput(seconds)}};
  if (!notes.empty()) json["notes"] = notes;
  return json;
}

std::string_view ToolVersion() { return STARCONSENSUS_VERSION; }

}  // namespace starconsensus::cli
