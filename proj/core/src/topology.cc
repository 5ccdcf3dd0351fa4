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

#include "starconsensus/topology.h"

#include <algorithm>
#include <map>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace starconsensus {

absl::Status BranchSpec::Validate() const {
  if (lengths.empty()) {
    return absl::InvalidArgumentError("at least one branch type is required");
  }
  if (lengths.size() != counts.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("m has ", lengths.size(), " entries but n has ",
                     counts.size()));
  }
  for (size_t p = 0; p < lengths.size(); ++p) {
    if (lengths[p] < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("m[", p, "] = ", lengths[p], " must be >= 1"));
    }
    if (counts[p] < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("n[", p, "] = ", counts[p], " must be >= 1"));
    }
  }
  if (cores < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("K = ", cores, " must be >= 1"));
  }
  std::set<int> seen;
  for (int m : lengths) {
    if (!seen.insert(m).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "duplicate branch length ", m,
          "; each branch type must have a distinct length (merge the counts)"));
    }
  }
  return absl::OkStatus();
}

int BranchSpec::NodeCount() const {
  int total = cores;
  for (size_t p = 0; p < lengths.size(); ++p) total += lengths[p] * counts[p];
  return total;
}

int BranchSpec::EdgeCount() const {
  int total = 0;
  for (size_t p = 0; p < lengths.size(); ++p) {
    total += cores * counts[p] + (lengths[p] - 1) * counts[p];
  }
  return total;
}

int BranchSpec::StratumCount() const {
  int total = 0;
  for (int m : lengths) total += m;
  return total;
}

bool BranchSpec::AllCountsAtLeastTwo() const {
  return std::all_of(counts.begin(), counts.end(),
                     [](int n) { return n >= 2; });
}

std::string BranchSpec::DebugString() const {
  return absl::StrCat("m=[", absl::StrJoin(lengths, ","), "] n=[",
                      absl::StrJoin(counts, ","), "] K=", cores);
}

BranchSpec MergeDuplicateLengths(const BranchSpec& spec) {
  std::map<int, int> by_length;
  for (size_t p = 0; p < spec.lengths.size() && p < spec.counts.size(); ++p) {
    by_length[spec.lengths[p]] += spec.counts[p];
  }
  BranchSpec merged;
  merged.cores = spec.cores;
  for (const auto& [m, n] : by_length) {
    merged.lengths.push_back(m);
    merged.counts.push_back(n);
  }
  return merged;
}

absl::StatusOr<StarNetwork> StarNetwork::Build(const BranchSpec& spec) {
  if (absl::Status status = spec.Validate(); !status.ok()) return status;

  StarNetwork net;
  net.spec_ = spec;
  net.node_count_ = spec.NodeCount();

  const int num_types = spec.num_types();
  net.type_offsets_.resize(num_types);
  net.stratum_offsets_.resize(num_types);
  int next_node = spec.cores;
  int next_stratum = 0;
  for (int p = 0; p < num_types; ++p) {
    net.type_offsets_[p] = next_node;
    net.stratum_offsets_[p] = next_stratum;
    next_node += spec.lengths[p] * spec.counts[p];
    next_stratum += spec.lengths[p];
  }

  net.strata_.reserve(next_stratum);
  for (int p = 0; p < num_types; ++p) {
    for (int i = 0; i < spec.lengths[p]; ++i) {
      net.strata_.push_back(Stratum{StratumId{p, i}, {}});
    }
  }

  net.edges_.reserve(spec.EdgeCount());
  auto add_edge = [&net](int a, int b, StratumId id) {
    const int index = static_cast<int>(net.edges_.size());
    net.edges_.push_back(Edge{std::min(a, b), std::max(a, b), id});
    net.strata_[net.FlatStratum(id)].edges.push_back(index);
  };
  for (int p = 0; p < num_types; ++p) {
    for (int inst = 0; inst < spec.counts[p]; ++inst) {
      const int head = net.IndexOf(NodeId::Branch(p, inst, 0));
      for (int c = 0; c < spec.cores; ++c) {
        add_edge(c, head, StratumId{p, 0});
      }
      for (int j = 1; j < spec.lengths[p]; ++j) {
        add_edge(head + j - 1, head + j, StratumId{p, j});
      }
    }
  }

  net.degrees_.assign(net.node_count_, 0);
  net.neighbors_.assign(net.node_count_, {});
  for (const Edge& e : net.edges_) {
    ++net.degrees_[e.u];
    ++net.degrees_[e.v];
    net.neighbors_[e.u].push_back(e.v);
    net.neighbors_[e.v].push_back(e.u);
  }
  for (auto& list : net.neighbors_) std::sort(list.begin(), list.end());
  return net;
}

int StarNetwork::IndexOf(const NodeId& node) const {
  if (node.kind == NodeId::Kind::kCenter) return node.center;
  return type_offsets_[node.type] +
         node.instance * spec_.lengths[node.type] + node.position;
}

NodeId StarNetwork::NodeAt(int index) const {
  if (index < spec_.cores) return NodeId::Center(index);
  // type_offsets_ is increasing; find the last offset <= index.
  const auto it =
      std::upper_bound(type_offsets_.begin(), type_offsets_.end(), index);
  const int type = static_cast<int>(it - type_offsets_.begin()) - 1;
  const int local = index - type_offsets_[type];
  const int m = spec_.lengths[type];
  return NodeId::Branch(type, local / m, local % m);
}

int StarNetwork::MaxDegree() const {
  return *std::max_element(degrees_.begin(), degrees_.end());
}

}  // namespace starconsensus
