// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <span>
#include <vector>

#include "ectsim/sparse.hpp"

namespace ectsim {

// Fill-reducing column order: minimum-degree elimination on the group graph
// (dofs sharing a mesh node collapse to one group), expanded back to dofs.
// An empty hint treats every dof as its own group.
std::vector<int> min_degree_order(const CscMatrix& a, std::span<const int> dof_group);

struct SolveResult {
  std::vector<complexd> x;
  double residual = 0.0;  // ||Ax-b|| / ||b||
};

// Sparse LU with threshold partial pivoting, reusable across right-hand
// sides. Immutable after compute(); concurrent solves use caller-local
// workspaces internally.
class Factorization {
 public:
  static Factorization compute(const CscMatrix& a, std::span<const int> dof_group = {});

  // Backsolve plus iterative refinement; throws SolverError if the relative
  // residual cannot be brought to the contract tolerance.
  SolveResult solve(std::span<const complexd> b) const;

  int dim() const { return n_; }
  size_t factor_nnz() const { return l_values_.size() + u_values_.size(); }
  const CscMatrix& matrix() const { return a_; }

  static constexpr double kResidualContract = 1e-10;

 private:
  void backsolve(std::span<complexd> x) const;  // in place, permuted system

  int n_ = 0;
  CscMatrix a_;                 // kept for refinement and residuals
  std::vector<int> col_order_;  // fill-reducing column permutation q
  std::vector<int> pinv_;       // row i of A is row pinv_[i] of PA
  std::vector<int> l_ptr_, l_idx_;
  std::vector<complexd> l_values_;  // unit lower triangular, diag implicit
  std::vector<int> u_ptr_, u_idx_;
  std::vector<complexd> u_values_;  // upper triangular, diag last per column
};

struct IterativeOptions {
  double tol = 1e-8;
  int max_iter = 500;
  int restart = 80;
};

struct IterativeResult {
  std::vector<complexd> x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Restarted GMRES with an ILU(0) right preconditioner. Breakdowns surface as
// SolverError; running out of iterations just clears `converged`.
IterativeResult solve_iterative(const CscMatrix& a, std::span<const complexd> b,
                                const IterativeOptions& options = {});

}  // namespace ectsim
