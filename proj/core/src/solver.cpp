// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "ectsim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

namespace ectsim {

namespace {

// Group dofs that always appear together (the dofs of one mesh node) and run
// the elimination on the much smaller group graph.
struct GroupGraph {
  int n_groups = 0;
  std::vector<int> group_of;               // dof -> group
  std::vector<std::vector<int>> dofs_of;   // group -> dofs, ascending
  std::vector<std::vector<int>> adjacency; // sorted, deduplicated, no self loops
};

GroupGraph build_group_graph(const CscMatrix& a, std::span<const int> dof_group) {
  const int n = a.n_cols;
  GroupGraph g;
  g.group_of.resize(n);
  std::unordered_map<long long, int> index;
  index.reserve(static_cast<size_t>(n));
  for (int d = 0; d < n; ++d) {
    long long key = dof_group.empty() || dof_group[d] < 0
                        ? (1LL << 40) + d  // its own group
                        : dof_group[d];
    auto [it, fresh] = index.try_emplace(key, g.n_groups);
    if (fresh) ++g.n_groups;
    g.group_of[d] = it->second;
  }
  g.dofs_of.resize(g.n_groups);
  for (int d = 0; d < n; ++d) g.dofs_of[g.group_of[d]].push_back(d);

  g.adjacency.resize(g.n_groups);
  for (int j = 0; j < a.n_cols; ++j) {
    int gj = g.group_of[j];
    for (int p = a.col_ptr[j]; p < a.col_ptr[j + 1]; ++p) {
      int gi = g.group_of[a.row_idx[p]];
      if (gi != gj) {
        g.adjacency[gi].push_back(gj);
        g.adjacency[gj].push_back(gi);
      }
    }
  }
  for (auto& row : g.adjacency) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return g;
}

// Minimum-degree elimination on the group graph with quotient-graph element
// absorption and exact external degrees. Deterministic: ties break toward the
// lower group index.
std::vector<int> min_degree_groups(const GroupGraph& g) {
  const int n = g.n_groups;
  std::vector<std::vector<int>> adj_var = g.adjacency;
  std::vector<std::vector<int>> adj_el(n);
  std::vector<std::vector<int>> el_vars;  // element -> member variables
  std::vector<char> eliminated(n, 0);
  std::vector<int> degree(n, 0);
  std::vector<int> stamp(n, -1);
  int stamp_counter = 0;

  using Entry = std::pair<int, int>;  // (degree, group), lazily invalidated
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (int v = 0; v < n; ++v) {
    degree[v] = static_cast<int>(adj_var[v].size());
    heap.emplace(degree[v], v);
  }

  std::vector<int> order;
  order.reserve(n);
  std::vector<int> scratch;
  while (static_cast<int>(order.size()) < n) {
    int v = -1;
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      if (!eliminated[u] && d == degree[u]) {
        v = u;
        break;
      }
      heap.pop();
    }
    if (v < 0) {
      for (int u = 0; u < n; ++u) {
        if (!eliminated[u]) order.push_back(u);
      }
      break;
    }
    // Dense tail: once the remaining subgraph is nearly dense the update cost
    // outweighs any fill gain; finish by current degree in one shot.
    int remaining = n - static_cast<int>(order.size());
    if (remaining <= 4096 && degree[v] >= remaining / 2) {
      std::vector<std::pair<int, int>> rest;
      rest.reserve(remaining);
      for (int u = 0; u < n; ++u) {
        if (!eliminated[u]) rest.emplace_back(degree[u], u);
      }
      std::sort(rest.begin(), rest.end());
      for (const auto& [d, u] : rest) order.push_back(u);
      break;
    }

    heap.pop();
    eliminated[v] = 1;
    order.push_back(v);

    // Fill neighborhood: live variable neighbors plus members of v's elements.
    ++stamp_counter;
    scratch.clear();
    auto absorb = [&](int u) {
      if (!eliminated[u] && stamp[u] != stamp_counter) {
        stamp[u] = stamp_counter;
        scratch.push_back(u);
      }
    };
    for (int u : adj_var[v]) absorb(u);
    for (int e : adj_el[v]) {
      for (int u : el_vars[e]) absorb(u);
      el_vars[e].clear();  // absorbed into the new element
    }
    std::sort(scratch.begin(), scratch.end());

    int e_new = static_cast<int>(el_vars.size());
    el_vars.push_back(scratch);
    std::vector<int> absorbed = adj_el[v];
    std::sort(absorbed.begin(), absorbed.end());

    for (int u : el_vars[e_new]) {
      // Drop v, eliminated vars and vars now covered by the new element.
      auto& av = adj_var[u];
      size_t out = 0;
      for (int w : av) {
        if (w == v || eliminated[w] || stamp[w] == stamp_counter) continue;
        av[out++] = w;
      }
      av.resize(out);
      // Replace absorbed elements with the new one.
      auto& ae = adj_el[u];
      out = 0;
      for (int e : ae) {
        if (!el_vars[e].empty() && !std::binary_search(absorbed.begin(), absorbed.end(), e)) {
          ae[out++] = e;
        }
      }
      ae.resize(out);
      ae.push_back(e_new);

      // Exact external degree via a fresh mark pass.
      ++stamp_counter;
      int deg = 0;
      stamp[u] = stamp_counter;
      for (int w : av) {
        if (stamp[w] != stamp_counter) {
          stamp[w] = stamp_counter;
          ++deg;
        }
      }
      for (int e : ae) {
        for (int w : el_vars[e]) {
          if (!eliminated[w] && stamp[w] != stamp_counter) {
            stamp[w] = stamp_counter;
            ++deg;
          }
        }
      }
      degree[u] = deg;
      heap.emplace(deg, u);
    }
    adj_var[v].clear();
    adj_el[v].clear();
  }
  return order;
}

}  // namespace

std::vector<int> min_degree_order(const CscMatrix& a, std::span<const int> dof_group) {
  GroupGraph g = build_group_graph(a, dof_group);
  std::vector<int> group_order = min_degree_groups(g);
  std::vector<int> order;
  order.reserve(a.n_cols);
  for (int grp : group_order) {
    for (int d : g.dofs_of[grp]) order.push_back(d);
  }
  return order;
}

Factorization Factorization::compute(const CscMatrix& a, std::span<const int> dof_group) {
  if (a.n_rows != a.n_cols) throw SolverError("factorize: matrix must be square");
  const int n = a.n_cols;
  Factorization f;
  f.n_ = n;
  f.a_ = a;
  f.col_order_ = min_degree_order(a, dof_group);
  f.pinv_.assign(n, -1);

  // Threshold partial pivoting: keep the natural (structural) pivot whenever
  // it is within kPivotThreshold of the column maximum, which preserves the
  // fill pattern predicted by the symmetric ordering.
  constexpr double kPivotThreshold = 0.1;

  f.l_ptr_.assign(n + 1, 0);
  f.u_ptr_.assign(n + 1, 0);
  size_t reserve0 = static_cast<size_t>(a.nnz()) * 8 + 64;
  f.l_idx_.reserve(reserve0);
  f.l_values_.reserve(reserve0);
  f.u_idx_.reserve(reserve0);
  f.u_values_.reserve(reserve0);

  std::vector<complexd> x(n, complexd(0.0, 0.0));
  std::vector<int> flag(n, -1);
  std::vector<int> reach;       // topological order, reversed DFS finish
  std::vector<int> dfs_stack;
  std::vector<int> dfs_ptr(n, 0);
  reach.reserve(256);

  for (int j = 0; j < n; ++j) {
    const int col = f.col_order_[j];

    // Symbolic step: reach of the column pattern in the current L graph.
    reach.clear();
    for (int p = a.col_ptr[col]; p < a.col_ptr[col + 1]; ++p) {
      int root = a.row_idx[p];
      if (flag[root] == j) continue;
      dfs_stack.clear();
      dfs_stack.push_back(root);
      flag[root] = j;
      dfs_ptr[root] = f.pinv_[root] >= 0 ? f.l_ptr_[f.pinv_[root]] : -1;
      while (!dfs_stack.empty()) {
        int node = dfs_stack.back();
        int k = f.pinv_[node];
        bool descended = false;
        if (k >= 0) {
          int& ptr = dfs_ptr[node];
          while (ptr < f.l_ptr_[k + 1]) {
            int child = f.l_idx_[ptr++];
            if (flag[child] != j) {
              flag[child] = j;
              dfs_ptr[child] = f.pinv_[child] >= 0 ? f.l_ptr_[f.pinv_[child]] : -1;
              dfs_stack.push_back(child);
              descended = true;
              break;
            }
          }
          if (descended) continue;
        }
        reach.push_back(node);
        dfs_stack.pop_back();
      }
    }
    std::reverse(reach.begin(), reach.end());  // topological order

    // Numeric step: sparse triangular solve against the finished columns.
    for (int r : reach) x[r] = complexd(0.0, 0.0);
    for (int p = a.col_ptr[col]; p < a.col_ptr[col + 1]; ++p) {
      x[a.row_idx[p]] = a.values[p];
    }
    for (int r : reach) {
      int k = f.pinv_[r];
      if (k < 0) continue;
      complexd xr = x[r];
      if (xr == complexd(0.0, 0.0)) continue;
      for (int p = f.l_ptr_[k]; p < f.l_ptr_[k + 1]; ++p) {
        x[f.l_idx_[p]] -= f.l_values_[p] * xr;
      }
    }

    // Pivot among the not-yet-pivotal rows.
    double amax = 0.0;
    int pivot_row = -1;
    bool diag_candidate = false;
    double diag_mag = 0.0;
    for (int r : reach) {
      if (f.pinv_[r] >= 0) continue;
      double mag = std::abs(x[r]);
      if (mag > amax || (mag == amax && (pivot_row < 0 || r < pivot_row))) {
        amax = mag;
        pivot_row = r;
      }
      if (r == col) {
        diag_candidate = true;
        diag_mag = mag;
      }
    }
    if (pivot_row < 0 || amax == 0.0) {
      throw SolverError("singular pivot at dof " + std::to_string(col) +
                        " (column exactly zero after elimination)");
    }
    if (diag_candidate && diag_mag >= kPivotThreshold * amax) pivot_row = col;
    const complexd pivot_value = x[pivot_row];
    f.pinv_[pivot_row] = j;

    // Split the column: pivotal rows to U (by pivot position), rest to L.
    for (int r : reach) {
      if (f.pinv_[r] >= 0 && r != pivot_row) {
        f.u_idx_.push_back(f.pinv_[r]);
        f.u_values_.push_back(x[r]);
      }
    }
    f.u_idx_.push_back(j);  // diagonal stored last in its column
    f.u_values_.push_back(pivot_value);
    f.u_ptr_[j + 1] = static_cast<int>(f.u_idx_.size());

    for (int r : reach) {
      if (f.pinv_[r] < 0) {
        f.l_idx_.push_back(r);  // remapped to pivot positions afterwards
        f.l_values_.push_back(x[r] / pivot_value);
      }
    }
    f.l_ptr_[j + 1] = static_cast<int>(f.l_idx_.size());
  }

  for (auto& idx : f.l_idx_) idx = f.pinv_[idx];
  return f;
}

void Factorization::backsolve(std::span<complexd> x) const {
  // Unit lower solve in pivot order.
  for (int j = 0; j < n_; ++j) {
    complexd xj = x[j];
    if (xj == complexd(0.0, 0.0)) continue;
    for (int p = l_ptr_[j]; p < l_ptr_[j + 1]; ++p) {
      x[l_idx_[p]] -= l_values_[p] * xj;
    }
  }
  // Upper solve; the diagonal entry is stored last in each column.
  for (int j = n_ - 1; j >= 0; --j) {
    complexd xj = x[j] / u_values_[u_ptr_[j + 1] - 1];
    x[j] = xj;
    if (xj == complexd(0.0, 0.0)) continue;
    for (int p = u_ptr_[j]; p < u_ptr_[j + 1] - 1; ++p) {
      x[u_idx_[p]] -= u_values_[p] * xj;
    }
  }
}

SolveResult Factorization::solve(std::span<const complexd> b) const {
  if (static_cast<int>(b.size()) != n_) throw SolverError("solve: rhs dimension mismatch");
  std::vector<complexd> work(n_), x(n_, complexd(0.0, 0.0)), residual(b.begin(), b.end());

  // Backsolve plus iterative refinement until the residual contract holds.
  constexpr int kMaxRefine = 4;
  double rel = 0.0;
  const double nb = vector_norm(b);
  for (int pass = 0; pass <= kMaxRefine; ++pass) {
    for (int i = 0; i < n_; ++i) work[pinv_[i]] = residual[i];
    backsolve(work);
    for (int j = 0; j < n_; ++j) x[col_order_[j]] += work[j];

    std::copy(b.begin(), b.end(), residual.begin());
    for (int j = 0; j < n_; ++j) {
      complexd xj = x[j];
      if (xj == complexd(0.0, 0.0)) continue;
      for (int p = a_.col_ptr[j]; p < a_.col_ptr[j + 1]; ++p) {
        residual[a_.row_idx[p]] -= a_.values[p] * xj;
      }
    }
    double nr = vector_norm(residual);
    rel = nb > 0.0 ? nr / nb : nr;
    if (rel <= kResidualContract) break;
  }
  if (rel > kResidualContract) {
    throw SolverError("direct solve failed the residual contract: achieved " +
                      std::to_string(rel));
  }
  return {std::move(x), rel};
}

}  // namespace ectsim
