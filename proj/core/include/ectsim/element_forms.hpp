// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include "ectsim/mesh.hpp"
#include "ectsim/types.hpp"

namespace ectsim {

using Mat12c = Eigen::Matrix<complexd, 12, 12>;
using Mat12x4c = Eigen::Matrix<complexd, 12, 4>;
using Mat4x12c = Eigen::Matrix<complexd, 4, 12>;
using Mat4c = Eigen::Matrix<complexd, 4, 4>;

// Per-tet geometry of the linear basis: constant barycentric gradients and
// the (positive) volume. Local vector dof (node a, component c) <-> 3a + c.
struct TetFrame {
  std::array<Vec3, 4> grad;
  double volume = 0.0;

  static TetFrame from(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3);
  static TetFrame from(const Mesh& mesh, int tet);
};

// Per-triangle geometry for surface terms: unit normal, area, and in-plane
// gradients of the three surface basis functions.
struct TriFrame {
  std::array<Vec3, 3> grad_tau;
  Vec3 normal;
  double area = 0.0;

  static TriFrame from(const Vec3& p0, const Vec3& p1, const Vec3& p2);
};

// Vector-block element matrix: (1/mu) curl-curl + (1/mu_tilde) div-div
// - i*omega*sigma mass. Complex symmetric.
Mat12c element_l11(const TetFrame& k, double mu, double mu_tilde, double sigma,
                   double omega);

// Couplings -sigma * grad(V) . Phi and its transpose -sigma * A . grad(phi).
Mat12x4c element_l12(const TetFrame& k, double sigma);
Mat4x12c element_l21(const TetFrame& k, double sigma);

// Scalar block -(1/i*omega) sigma grad-grad, augmented with the
// delta * mu * sigma mass that lifts the constant kernel.
Mat4c element_l22(const TetFrame& k, double sigma, double omega, double delta_gauge,
                  double mu);

// Surface contributions of the impedance condition on the plate boundary,
// split per destination block. Local surface vector dof (node a, comp c)
// <-> 3a + c over the triangle's three nodes.
struct IbcElement {
  Eigen::Matrix<complexd, 9, 9> aa;
  Eigen::Matrix<complexd, 9, 3> av;
  Eigen::Matrix<complexd, 3, 9> va;
  Eigen::Matrix<complexd, 3, 3> vv;
};
IbcElement element_ibc(const TriFrame& t, complexd z_surface, double omega);

// Vector-block mass matrix |K|(1+delta_ab)/20 on the identity component
// pairing; used by the source-term assembly.
Mat12c element_vector_mass(const TetFrame& k);

}  // namespace ectsim
