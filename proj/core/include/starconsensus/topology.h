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

// Generic star and K-cored star networks.
//
// A network is described by B branch types. Branch type p has `lengths[p]`
// nodes per branch and `counts[p]` identical branches. K mutually
// non-adjacent central nodes each connect to the head (position 0) of every
// branch. Nodes are indexed densely: centers first, then branch nodes in
// (type, instance, position) lexicographic order.
//
// All indices in this API are 0-based. The edge strata are the orbits of the
// automorphism group acting on edges: stratum (p, 0) holds every
// center-to-head edge of branch type p, stratum (p, i) for i >= 1 holds the
// edges between positions i-1 and i of every type-p branch.

#ifndef STARCONSENSUS_TOPOLOGY_H_
#define STARCONSENSUS_TOPOLOGY_H_

#include <cstddef>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace starconsensus {

struct BranchSpec {
  std::vector<int> lengths;  // m
  std::vector<int> counts;   // n
  int cores = 1;             // K

  int num_types() const { return static_cast<int>(lengths.size()); }

  // Returns OK iff B >= 1, lengths and counts have equal size, every entry is
  // positive, cores >= 1 and the lengths are pairwise distinct.
  absl::Status Validate() const;

  // Number of nodes, K + sum_p m_p n_p.
  int NodeCount() const;
  // Number of edges, K sum_p n_p + sum_p (m_p - 1) n_p.
  int EdgeCount() const;
  // Number of edge strata, sum_p m_p.
  int StratumCount() const;

  // True when every n_p >= 2, the regime where the stratified blocks satisfy
  // the one-row interlacing relation.
  bool AllCountsAtLeastTwo() const;

  std::string DebugString() const;

  friend bool operator==(const BranchSpec&, const BranchSpec&) = default;
};

// Merges branch types sharing a length by summing their counts. The result
// is sorted by length. Core code rejects duplicates; this is a convenience for
// callers that accept loosely specified input.
BranchSpec MergeDuplicateLengths(const BranchSpec& spec);

struct NodeId {
  enum class Kind { kCenter, kBranch };

  Kind kind = Kind::kCenter;
  int center = 0;    // valid for kCenter, in [0, K)
  int type = 0;      // valid for kBranch, in [0, B)
  int instance = 0;  // in [0, n_type)
  int position = 0;  // in [0, m_type); 0 is adjacent to the centers

  static NodeId Center(int c) { return {Kind::kCenter, c, 0, 0, 0}; }
  static NodeId Branch(int type, int instance, int position) {
    return {Kind::kBranch, 0, type, instance, position};
  }

  friend bool operator==(const NodeId&, const NodeId&) = default;
};

struct StratumId {
  int type = 0;      // p
  int position = 0;  // i; 0 is the center-to-head stratum

  friend bool operator==(const StratumId&, const StratumId&) = default;
};

struct Edge {
  int u = 0;  // dense index, u < v
  int v = 0;
  StratumId stratum;
};

struct Stratum {
  StratumId id;
  std::vector<int> edges;  // indices into StarNetwork::edges()
};

class StarNetwork {
 public:
  static absl::StatusOr<StarNetwork> Build(const BranchSpec& spec);

  const BranchSpec& spec() const { return spec_; }
  int node_count() const { return node_count_; }
  const std::vector<Edge>& edges() const { return edges_; }

  // Strata in (type, position) order; the flat position of stratum (p, i) is
  // StratumOffset(p) + i.
  const std::vector<Stratum>& strata() const { return strata_; }
  int StratumOffset(int type) const { return stratum_offsets_[type]; }
  int FlatStratum(StratumId id) const {
    return stratum_offsets_[id.type] + id.position;
  }

  int IndexOf(const NodeId& node) const;
  NodeId NodeAt(int index) const;

  int Degree(int index) const { return degrees_[index]; }
  const std::vector<int>& degrees() const { return degrees_; }
  int MaxDegree() const;

  // Sorted neighbor lists.
  const std::vector<int>& Neighbors(int index) const {
    return neighbors_[index];
  }

 private:
  StarNetwork() = default;

  BranchSpec spec_;
  int node_count_ = 0;
  std::vector<int> type_offsets_;     // first dense index of each branch type
  std::vector<int> stratum_offsets_;  // prefix sums of lengths
  std::vector<Edge> edges_;
  std::vector<Stratum> strata_;
  std::vector<int> degrees_;
  std::vector<std::vector<int>> neighbors_;
};

}  // namespace starconsensus

#endif  // STARCONSENSUS_TOPOLOGY_H_
