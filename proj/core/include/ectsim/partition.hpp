// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "ectsim/mesh.hpp"

namespace ectsim {

struct PartitionMap {
  std::vector<int> part_of;  // tet -> part id
  int parts = 0;
};

// Face-adjacency dual graph of the tet mesh (CSR).
struct DualGraph {
  std::vector<int> offsets;
  std::vector<int> neighbors;
  int degree(int t) const { return offsets[t + 1] - offsets[t]; }
};
DualGraph build_dual_graph(const Mesh& mesh);

// Greedy graph growing from spaced seeds plus a balancing pass. Deterministic
// for fixed (mesh, parts, seed); ties always break toward the lower tet index.
PartitionMap partition_tets(const Mesh& mesh, int parts, unsigned seed = 0);

struct PartitionStats {
  int parts = 0;
  std::vector<int> sizes;
  double imbalance = 0.0;  // max size / mean size
  long long edge_cut = 0;  // dual edges crossing parts
  std::string to_string() const;
};
PartitionStats partition_stats(const PartitionMap& map, const Mesh& mesh);

// True when every part induces a connected subgraph of the dual graph.
bool parts_connected(const PartitionMap& map, const Mesh& mesh);

}  // namespace ectsim
