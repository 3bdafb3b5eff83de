// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "ectsim/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace ectsim {

void SparseComplexBlock::canonicalize() {
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    if (a.row != b.row) return a.row < b.row;
    return a.col < b.col;
  });
  size_t out = 0;
  for (size_t i = 0; i < entries.size();) {
    Triplet merged = entries[i];
    size_t j = i + 1;
    while (j < entries.size() && entries[j].row == merged.row && entries[j].col == merged.col) {
      merged.value += entries[j].value;
      ++j;
    }
    entries[out++] = merged;
    i = j;
  }
  entries.resize(out);
  canonical = true;
}

double SparseComplexBlock::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& t : entries) sum += std::norm(t.value);
  return std::sqrt(sum);
}

SparseComplexBlock reduce_blocks(const std::vector<SparseComplexBlock>& blocks) {
  if (blocks.empty()) throw SolverError("reduce_blocks: empty block list");
  SparseComplexBlock merged;
  merged.rows = blocks.front().rows;
  merged.cols = blocks.front().cols;
  size_t total = 0;
  for (const auto& b : blocks) {
    if (!(b.rows == merged.rows) || !(b.cols == merged.cols)) {
      throw SolverError("reduce_blocks: dof space descriptors differ");
    }
    total += b.entries.size();
  }
  merged.entries.reserve(total);
  for (const auto& b : blocks) {
    merged.entries.insert(merged.entries.end(), b.entries.begin(), b.entries.end());
  }
  merged.canonicalize();
  return merged;
}

double frobenius_diff(const SparseComplexBlock& a, const SparseComplexBlock& b) {
  if (!a.canonical || !b.canonical) throw SolverError("frobenius_diff needs canonical blocks");
  double sum = 0.0;
  size_t i = 0, j = 0;
  auto before = [](const Triplet& x, const Triplet& y) {
    if (x.row != y.row) return x.row < y.row;
    return x.col < y.col;
  };
  while (i < a.entries.size() || j < b.entries.size()) {
    if (j >= b.entries.size() || (i < a.entries.size() && before(a.entries[i], b.entries[j]))) {
      sum += std::norm(a.entries[i].value);
      ++i;
    } else if (i >= a.entries.size() || before(b.entries[j], a.entries[i])) {
      sum += std::norm(b.entries[j].value);
      ++j;
    } else {
      sum += std::norm(a.entries[i].value - b.entries[j].value);
      ++i;
      ++j;
    }
  }
  return std::sqrt(sum);
}

CscMatrix CscMatrix::from_triplets(int n_rows, int n_cols, std::span<const Triplet> triplets) {
  CscMatrix m;
  m.n_rows = n_rows;
  m.n_cols = n_cols;
  std::vector<Triplet> sorted(triplets.begin(), triplets.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
    if (a.col != b.col) return a.col < b.col;
    return a.row < b.row;
  });
  m.col_ptr.assign(n_cols + 1, 0);
  m.row_idx.reserve(sorted.size());
  m.values.reserve(sorted.size());
  for (size_t i = 0; i < sorted.size();) {
    const Triplet& t = sorted[i];
    if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols) {
      throw SolverError("triplet index out of range");
    }
    complexd v = t.value;
    size_t j = i + 1;
    while (j < sorted.size() && sorted[j].row == t.row && sorted[j].col == t.col) {
      v += sorted[j].value;
      ++j;
    }
    m.row_idx.push_back(t.row);
    m.values.push_back(v);
    m.col_ptr[t.col + 1]++;
    i = j;
  }
  for (int c = 0; c < n_cols; ++c) m.col_ptr[c + 1] += m.col_ptr[c];
  return m;
}

void CscMatrix::multiply(std::span<const complexd> x, std::span<complexd> y) const {
  std::fill(y.begin(), y.end(), complexd(0.0, 0.0));
  for (int j = 0; j < n_cols; ++j) {
    complexd xj = x[j];
    if (xj == complexd(0.0, 0.0)) continue;
    for (int p = col_ptr[j]; p < col_ptr[j + 1]; ++p) {
      y[row_idx[p]] += values[p] * xj;
    }
  }
}

double vector_norm(std::span<const complexd> v) {
  double sum = 0.0;
  for (const auto& x : v) sum += std::norm(x);
  return std::sqrt(sum);
}

double relative_residual(const CscMatrix& a, std::span<const complexd> x,
                         std::span<const complexd> b) {
  std::vector<complexd> r(b.begin(), b.end());
  for (int j = 0; j < a.n_cols; ++j) {
    complexd xj = x[j];
    if (xj == complexd(0.0, 0.0)) continue;
    for (int p = a.col_ptr[j]; p < a.col_ptr[j + 1]; ++p) {
      r[a.row_idx[p]] -= a.values[p] * xj;
    }
  }
  double nb = vector_norm(b);
  double nr = vector_norm(r);
  return nb > 0.0 ? nr / nb : nr;
}

void write_block_coordinates(const SparseComplexBlock& block, const std::string& path) {
  SparseComplexBlock copy = block;
  if (!copy.canonical) copy.canonicalize();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open block dump for writing: " + path);
  char buf[160];
  for (const auto& t : copy.entries) {
    std::snprintf(buf, sizeof(buf), "%d %d %.17g %.17g\n", t.row, t.col, t.value.real(),
                  t.value.imag());
    out << buf;
  }
  if (!out) throw IoError("failed writing block dump: " + path);
}

}  // namespace ectsim
