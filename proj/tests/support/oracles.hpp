// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <array>
#include <random>

#include "ectsim/element_forms.hpp"
#include "ectsim/mesh.hpp"
#include "ectsim/types.hpp"

// Test-side oracles, independent of the closed-form element integrals they
// check: basis functions come from pivoted linear solves and the integrals
// from Gauss quadrature (all integrands here have degree <= 2).
namespace ectsim::oracle {

// Barycentric coordinates and gradients on a tet via a 4x4 solve.
struct TetBasis {
  std::array<Vec3, 4> points;
  Eigen::Matrix4d coeffs;  // column a: (c0, cx, cy, cz) of lambda_a
  double volume = 0.0;

  static TetBasis from(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3) {
    TetBasis basis;
    basis.points = {p0, p1, p2, p3};
    Eigen::Matrix4d vandermonde;
    for (int a = 0; a < 4; ++a) {
      vandermonde(0, a) = 1.0;
      vandermonde(1, a) = basis.points[a].x();
      vandermonde(2, a) = basis.points[a].y();
      vandermonde(3, a) = basis.points[a].z();
    }
    // lambda(x) = coeffs^T (1, x, y, z); coeffs solves V^T C = I.
    basis.coeffs = vandermonde.transpose().fullPivLu().solve(Eigen::Matrix4d::Identity());
    basis.volume = std::abs(vandermonde.determinant()) / 6.0;
    return basis;
  }

  double lambda(int a, const Vec3& x) const {
    return coeffs(0, a) + coeffs(1, a) * x.x() + coeffs(2, a) * x.y() + coeffs(3, a) * x.z();
  }
  Vec3 grad(int a) const { return Vec3(coeffs(1, a), coeffs(2, a), coeffs(3, a)); }
};

// Degree-2 exact 4-point rule (barycentric (alpha, beta, beta, beta)).
struct TetQuadrature {
  std::array<std::array<double, 4>, 4> bary;
  std::array<double, 4> weight;

  static TetQuadrature degree2() {
    const double alpha = 0.5854101966249685;  // (5 + 3 sqrt 5) / 20
    const double beta = 0.1381966011250105;   // (5 - sqrt 5) / 20
    TetQuadrature q;
    for (int i = 0; i < 4; ++i) {
      q.weight[i] = 0.25;
      for (int j = 0; j < 4; ++j) q.bary[i][j] = i == j ? alpha : beta;
    }
    return q;
  }
};

inline Vec3 quad_point(const TetBasis& basis, const std::array<double, 4>& bary) {
  Vec3 x = Vec3::Zero();
  for (int a = 0; a < 4; ++a) x += bary[a] * basis.points[a];
  return x;
}

// Quadrature versions of the four volume element forms.
inline Mat12c l11_oracle(const TetBasis& b, double mu, double mu_tilde, double sigma,
                         double omega) {
  TetQuadrature q = TetQuadrature::degree2();
  Mat12c m = Mat12c::Zero();
  for (int a = 0; a < 4; ++a) {
    for (int bb = 0; bb < 4; ++bb) {
      double mass = 0.0;
      for (int i = 0; i < 4; ++i) {
        Vec3 x = quad_point(b, q.bary[i]);
        mass += q.weight[i] * b.volume * b.lambda(a, x) * b.lambda(bb, x);
      }
      for (int c = 0; c < 3; ++c) {
        Vec3 ec = Vec3::Unit(c);
        Vec3 curl_a = b.grad(a).cross(ec);
        for (int d = 0; d < 3; ++d) {
          Vec3 ed = Vec3::Unit(d);
          Vec3 curl_b = b.grad(bb).cross(ed);
          double curl_term = b.volume * curl_a.dot(curl_b) / mu;
          double div_term = b.volume * b.grad(a)[c] * b.grad(bb)[d] / mu_tilde;
          complexd entry(curl_term + div_term, 0.0);
          if (c == d) entry += complexd(0.0, -omega * sigma) * mass;
          m(3 * a + c, 3 * bb + d) = entry;
        }
      }
    }
  }
  return m;
}

inline Mat12x4c l12_oracle(const TetBasis& b, double sigma) {
  TetQuadrature q = TetQuadrature::degree2();
  Mat12x4c m = Mat12x4c::Zero();
  for (int a = 0; a < 4; ++a) {
    double integral_lambda = 0.0;
    for (int i = 0; i < 4; ++i) {
      integral_lambda += q.weight[i] * b.volume * b.lambda(a, quad_point(b, q.bary[i]));
    }
    for (int c = 0; c < 3; ++c) {
      for (int bb = 0; bb < 4; ++bb) {
        m(3 * a + c, bb) = complexd(-sigma * b.grad(bb)[c] * integral_lambda, 0.0);
      }
    }
  }
  return m;
}

inline Mat4x12c l21_oracle(const TetBasis& b, double sigma) {
  TetQuadrature q = TetQuadrature::degree2();
  Mat4x12c m = Mat4x12c::Zero();
  for (int bb = 0; bb < 4; ++bb) {
    double integral_lambda = 0.0;
    for (int i = 0; i < 4; ++i) {
      integral_lambda += q.weight[i] * b.volume * b.lambda(bb, quad_point(b, q.bary[i]));
    }
    for (int a = 0; a < 4; ++a) {
      for (int d = 0; d < 3; ++d) {
        m(a, 3 * bb + d) = complexd(-sigma * b.grad(a)[d] * integral_lambda, 0.0);
      }
    }
  }
  return m;
}

inline Mat4c l22_oracle(const TetBasis& b, double sigma, double omega, double delta_gauge,
                        double mu) {
  TetQuadrature q = TetQuadrature::degree2();
  Mat4c m = Mat4c::Zero();
  for (int a = 0; a < 4; ++a) {
    for (int bb = 0; bb < 4; ++bb) {
      double mass = 0.0;
      for (int i = 0; i < 4; ++i) {
        Vec3 x = quad_point(b, q.bary[i]);
        mass += q.weight[i] * b.volume * b.lambda(a, x) * b.lambda(bb, x);
      }
      // -1/(i*omega) * sigma * grad-grad plus the gauge mass.
      m(a, bb) = complexd(0.0, 1.0) / omega * sigma * (b.volume * b.grad(a).dot(b.grad(bb))) +
                 delta_gauge * mu * sigma * mass;
    }
  }
  return m;
}

// Triangle basis in an orthonormal tangent frame (3x3 solve), plus a 3-point
// edge-midpoint rule, exact for degree 2.
struct TriBasis {
  std::array<Vec3, 3> points;
  Vec3 normal;
  Vec3 u, v;  // tangent frame
  Eigen::Matrix3d coeffs;  // column a: (c0, cu, cv)
  double area = 0.0;

  static TriBasis from(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
    TriBasis b;
    b.points = {p0, p1, p2};
    Vec3 e1 = p1 - p0, e2 = p2 - p0;
    Vec3 cross = e1.cross(e2);
    b.area = 0.5 * cross.norm();
    b.normal = cross.normalized();
    b.u = e1.normalized();
    b.v = b.normal.cross(b.u);
    Eigen::Matrix3d vand;
    for (int a = 0; a < 3; ++a) {
      Vec3 d = b.points[a] - p0;
      vand(0, a) = 1.0;
      vand(1, a) = d.dot(b.u);
      vand(2, a) = d.dot(b.v);
    }
    b.coeffs = vand.transpose().fullPivLu().solve(Eigen::Matrix3d::Identity());
    return b;
  }

  double lambda(int a, const Vec3& x) const {
    Vec3 d = x - points[0];
    return coeffs(0, a) + coeffs(1, a) * d.dot(u) + coeffs(2, a) * d.dot(v);
  }
  Vec3 grad_tau(int a) const { return coeffs(1, a) * u + coeffs(2, a) * v; }
};

inline IbcElement ibc_oracle(const TriBasis& b, complexd z_surface, double omega) {
  IbcElement e;
  e.aa.setZero();
  e.av.setZero();
  e.va.setZero();
  e.vv.setZero();
  const std::array<Vec3, 3> pts = {0.5 * (b.points[0] + b.points[1]),
                                   0.5 * (b.points[1] + b.points[2]),
                                   0.5 * (b.points[2] + b.points[0])};
  const double w = b.area / 3.0;
  Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - b.normal * b.normal.transpose();
  const complexd inv_z = 1.0 / z_surface;
  const complexd iw(0.0, omega);

  for (int a = 0; a < 3; ++a) {
    for (int bb = 0; bb < 3; ++bb) {
      double mass = 0.0, int_a = 0.0;
      for (const Vec3& x : pts) {
        mass += w * b.lambda(a, x) * b.lambda(bb, x);
        int_a += w * b.lambda(a, x);
      }
      for (int c = 0; c < 3; ++c) {
        for (int d = 0; d < 3; ++d) {
          e.aa(3 * a + c, 3 * bb + d) = -iw * inv_z * mass * proj(c, d);
        }
        e.av(3 * a + c, bb) = -inv_z * int_a * b.grad_tau(bb)[c];
        e.va(bb, 3 * a + c) = -iw * inv_z * int_a * b.grad_tau(bb)[c];
      }
      e.vv(a, bb) = -inv_z * b.area * b.grad_tau(a).dot(b.grad_tau(bb));
    }
  }
  return e;
}

// Random well-shaped tets/triangles with positive orientation.
class RandomShapes {
 public:
  explicit RandomShapes(unsigned seed) : rng_(seed) {}

  std::array<Vec3, 4> tet() {
    while (true) {
      std::array<Vec3, 4> p;
      for (auto& x : p) x = Vec3(uniform(), uniform(), uniform());
      double vol = signed_tet_volume(p[0], p[1], p[2], p[3]);
      if (vol < 0.0) {
        std::swap(p[2], p[3]);
        vol = -vol;
      }
      if (vol > 5e-3) return p;
    }
  }

  std::array<Vec3, 3> triangle() {
    while (true) {
      std::array<Vec3, 3> p;
      for (auto& x : p) x = Vec3(uniform(), uniform(), uniform());
      double area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
      if (area > 1e-2) return p;
    }
  }

  double uniform() { return dist_(rng_); }

 private:
  std::mt19937 rng_;
  std::uniform_real_distribution<double> dist_{0.0, 1.0};
};

inline double rel_error(const Eigen::MatrixXcd& got, const Eigen::MatrixXcd& want) {
  double denom = want.norm();
  return denom > 0.0 ? (got - want).norm() / denom : (got - want).norm();
}

}  // namespace ectsim::oracle
