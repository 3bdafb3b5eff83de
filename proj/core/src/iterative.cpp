// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "ectsim/solver.hpp"

namespace ectsim {

namespace {

// Row-major copy with sorted columns and a diagonal pointer per row.
struct CsrMatrix {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col_idx;
  std::vector<complexd> values;
  std::vector<int> diag;

  static CsrMatrix from_csc(const CscMatrix& a) {
    CsrMatrix m;
    m.n = a.n_rows;
    m.row_ptr.assign(m.n + 1, 0);
    for (int r : a.row_idx) m.row_ptr[r + 1]++;
    for (int i = 0; i < m.n; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
    m.col_idx.resize(a.nnz());
    m.values.resize(a.nnz());
    std::vector<int> next(m.row_ptr.begin(), m.row_ptr.end() - 1);
    for (int j = 0; j < a.n_cols; ++j) {
      for (int p = a.col_ptr[j]; p < a.col_ptr[j + 1]; ++p) {
        int dst = next[a.row_idx[p]]++;
        m.col_idx[dst] = j;  // ascending per row because columns ascend
        m.values[dst] = a.values[p];
      }
    }
    m.diag.assign(m.n, -1);
    for (int i = 0; i < m.n; ++i) {
      for (int p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p) {
        if (m.col_idx[p] == i) {
          m.diag[i] = p;
          break;
        }
      }
    }
    return m;
  }

  int find(int row, int col) const {
    auto begin = col_idx.begin() + row_ptr[row];
    auto end = col_idx.begin() + row_ptr[row + 1];
    auto it = std::lower_bound(begin, end, col);
    if (it == end || *it != col) return -1;
    return static_cast<int>(it - col_idx.begin());
  }
};

// In-place ILU(0): incomplete factorization restricted to the pattern of A.
struct Ilu0 {
  CsrMatrix m;

  explicit Ilu0(const CscMatrix& a) : m(CsrMatrix::from_csc(a)) {
    for (int i = 0; i < m.n; ++i) {
      if (m.diag[i] < 0) {
        throw SolverError("ILU(0) breakdown: structurally missing diagonal at row " +
                          std::to_string(i));
      }
      for (int p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p) {
        int k = m.col_idx[p];
        if (k >= i) break;
        complexd pivot = m.values[m.diag[k]];
        if (pivot == complexd(0.0, 0.0)) {
          throw SolverError("ILU(0) breakdown: zero pivot at row " + std::to_string(k));
        }
        complexd factor = m.values[p] / pivot;
        m.values[p] = factor;
        for (int q = m.diag[k] + 1; q < m.row_ptr[k + 1]; ++q) {
          int idx = m.find(i, m.col_idx[q]);
          if (idx >= 0) m.values[idx] -= factor * m.values[q];
        }
      }
      if (m.values[m.diag[i]] == complexd(0.0, 0.0)) {
        throw SolverError("ILU(0) breakdown: zero pivot at row " + std::to_string(i));
      }
    }
  }

  void apply(std::span<const complexd> r, std::span<complexd> z) const {
    std::copy(r.begin(), r.end(), z.begin());
    for (int i = 0; i < m.n; ++i) {
      complexd acc = z[i];
      for (int p = m.row_ptr[i]; p < m.row_ptr[i + 1] && m.col_idx[p] < i; ++p) {
        acc -= m.values[p] * z[m.col_idx[p]];
      }
      z[i] = acc;
    }
    for (int i = m.n - 1; i >= 0; --i) {
      complexd acc = z[i];
      for (int p = m.row_ptr[i + 1] - 1; p > m.diag[i]; --p) {
        acc -= m.values[p] * z[m.col_idx[p]];
      }
      z[i] = acc / m.values[m.diag[i]];
    }
  }
};

}  // namespace

IterativeResult solve_iterative(const CscMatrix& a, std::span<const complexd> b,
                                const IterativeOptions& options) {
  if (a.n_rows != a.n_cols) throw SolverError("solve_iterative: matrix must be square");
  if (static_cast<int>(b.size()) != a.n_rows) {
    throw SolverError("solve_iterative: rhs dimension mismatch");
  }
  if (!(options.tol > 0.0)) throw SolverError("solve_iterative: tolerance must be positive");
  const int n = a.n_rows;

  IterativeResult result;
  result.x.assign(n, complexd(0.0, 0.0));
  const double nb = vector_norm(b);
  if (nb == 0.0) {
    result.converged = true;
    return result;
  }

  Ilu0 precond(a);
  const int restart = std::max(1, options.restart);
  std::vector<std::vector<complexd>> basis;
  std::vector<complexd> h((restart + 1) * restart, complexd(0.0, 0.0));
  std::vector<complexd> cs(restart), sn(restart), g(restart + 1);
  std::vector<complexd> w(n), z(n);

  auto h_at = [&](int i, int k) -> complexd& { return h[i * restart + k]; };

  int total_iters = 0;
  double rel = 1.0;
  while (total_iters < options.max_iter) {
    // Residual of the current iterate.
    std::vector<complexd> r(b.begin(), b.end());
    a.multiply(result.x, w);
    for (int i = 0; i < n; ++i) r[i] -= w[i];
    double beta = vector_norm(r);
    rel = beta / nb;
    if (rel <= options.tol) {
      result.converged = true;
      break;
    }

    basis.assign(1, r);
    for (auto& v : basis[0]) v /= beta;
    std::fill(g.begin(), g.end(), complexd(0.0, 0.0));
    g[0] = beta;

    int k = 0;
    for (; k < restart && total_iters < options.max_iter; ++k, ++total_iters) {
      // Right-preconditioned Arnoldi step with modified Gram-Schmidt.
      precond.apply(basis[k], z);
      a.multiply(z, w);
      for (int i = 0; i <= k; ++i) {
        complexd dot(0.0, 0.0);
        for (int r2 = 0; r2 < n; ++r2) dot += std::conj(basis[i][r2]) * w[r2];
        h_at(i, k) = dot;
        for (int r2 = 0; r2 < n; ++r2) w[r2] -= dot * basis[i][r2];
      }
      double wnorm = vector_norm(w);
      h_at(k + 1, k) = wnorm;

      // Apply the accumulated Givens rotations, then form the new one.
      for (int i = 0; i < k; ++i) {
        complexd t = cs[i] * h_at(i, k) + sn[i] * h_at(i + 1, k);
        h_at(i + 1, k) = -std::conj(sn[i]) * h_at(i, k) + std::conj(cs[i]) * h_at(i + 1, k);
        h_at(i, k) = t;
      }
      complexd hk = h_at(k, k);
      double denom = std::sqrt(std::norm(hk) + wnorm * wnorm);
      if (denom == 0.0) throw SolverError("GMRES breakdown: zero Hessenberg column");
      cs[k] = std::conj(hk) / denom;
      sn[k] = wnorm / denom;
      h_at(k, k) = cs[k] * hk + sn[k] * wnorm;
      h_at(k + 1, k) = complexd(0.0, 0.0);
      g[k + 1] = -std::conj(sn[k]) * g[k];
      g[k] = cs[k] * g[k];

      rel = std::abs(g[k + 1]) / nb;
      if (wnorm == 0.0 || rel <= options.tol) {
        ++k;
        ++total_iters;
        break;
      }
      basis.push_back(w);
      for (auto& v : basis.back() ) v /= wnorm;
    }

    // y = H^{-1} g by back substitution, then x += M^{-1} (V y).
    std::vector<complexd> y(k, complexd(0.0, 0.0));
    for (int i = k - 1; i >= 0; --i) {
      complexd acc = g[i];
      for (int j2 = i + 1; j2 < k; ++j2) acc -= h_at(i, j2) * y[j2];
      y[i] = acc / h_at(i, i);
    }
    std::fill(w.begin(), w.end(), complexd(0.0, 0.0));
    for (int i = 0; i < k; ++i) {
      for (int r2 = 0; r2 < n; ++r2) w[r2] += y[i] * basis[i][r2];
    }
    precond.apply(w, z);
    for (int i = 0; i < n; ++i) result.x[i] += z[i];
    result.iterations = total_iters;
    if (rel <= options.tol) {
      // Confirm with a true residual before reporting convergence.
      a.multiply(result.x, w);
      std::vector<complexd> r(b.begin(), b.end());
      for (int i = 0; i < n; ++i) r[i] -= w[i];
      rel = vector_norm(r) / nb;
      result.converged = rel <= options.tol;
      if (result.converged) break;
    }
  }
  result.iterations = total_iters;
  result.residual = rel;
  if (!result.converged) {
    // Recompute the achieved residual for honest reporting.
    a.multiply(result.x, w);
    std::vector<complexd> r(b.begin(), b.end());
    for (int i = 0; i < n; ++i) r[i] -= w[i];
    result.residual = vector_norm(r) / nb;
  }
  return result;
}

}  // namespace ectsim
