// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "ectsim/types.hpp"

namespace ectsim {

enum class DofKind : int {
  kVectorNodal = 0,     // 3 components per mesh node
  kScalarConductor = 1  // 1 dof per conductor-incident node
};

struct DofSpaceDesc {
  DofKind kind = DofKind::kVectorNodal;
  int size = 0;
  bool operator==(const DofSpaceDesc&) const = default;
};

struct Triplet {
  int row = 0;
  int col = 0;
  complexd value{};
};

// Coordinate-format complex block. Duplicates are allowed until
// canonicalize() merges them; merged blocks keep entries sorted by (row, col).
struct SparseComplexBlock {
  DofSpaceDesc rows;
  DofSpaceDesc cols;
  std::vector<Triplet> entries;
  bool canonical = false;

  void add(int row, int col, complexd value) {
    entries.push_back({row, col, value});
    canonical = false;
  }
  size_t nnz() const { return entries.size(); }
  void canonicalize();
  double frobenius_norm() const;  // canonical blocks only
};

// Associative merge: concatenates triplets in list order and canonicalizes.
// All inputs must share both space descriptors.
SparseComplexBlock reduce_blocks(const std::vector<SparseComplexBlock>& blocks);

// Frobenius norm of (a - b) for canonical blocks over identical spaces.
double frobenius_diff(const SparseComplexBlock& a, const SparseComplexBlock& b);

// Compressed sparse column storage for the merged global system.
struct CscMatrix {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<int> col_ptr;
  std::vector<int> row_idx;
  std::vector<complexd> values;

  size_t nnz() const { return values.size(); }
  static CscMatrix from_triplets(int n_rows, int n_cols, std::span<const Triplet> triplets);
  void multiply(std::span<const complexd> x, std::span<complexd> y) const;  // y = A x
};

double vector_norm(std::span<const complexd> v);
// ||A x - b|| / ||b|| (returns the absolute residual when b == 0).
double relative_residual(const CscMatrix& a, std::span<const complexd> x,
                         std::span<const complexd> b);

// Debug dump: "row col re im" lines, 0-based, sorted lexicographically.
void write_block_coordinates(const SparseComplexBlock& block, const std::string& path);

}  // namespace ectsim
