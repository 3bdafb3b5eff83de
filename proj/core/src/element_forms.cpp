// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "ectsim/element_forms.hpp"

namespace ectsim {

TetFrame TetFrame::from(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3) {
  Eigen::Matrix3d jac;
  jac.col(0) = p1 - p0;
  jac.col(1) = p2 - p0;
  jac.col(2) = p3 - p0;
  double det = jac.determinant();
  if (!(det > 0.0)) {
    throw MeshError("element frame on a degenerate or inverted tet");
  }
  Eigen::Matrix3d grad_t = jac.inverse().transpose();
  TetFrame f;
  f.volume = det / 6.0;
  f.grad[1] = grad_t.col(0);
  f.grad[2] = grad_t.col(1);
  f.grad[3] = grad_t.col(2);
  f.grad[0] = -(f.grad[1] + f.grad[2] + f.grad[3]);
  return f;
}

TetFrame TetFrame::from(const Mesh& mesh, int tet) {
  const auto& k = mesh.tets[tet].nodes;
  return from(mesh.nodes[k[0]], mesh.nodes[k[1]], mesh.nodes[k[2]], mesh.nodes[k[3]]);
}

TriFrame TriFrame::from(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
  Vec3 cross = (p1 - p0).cross(p2 - p0);
  double two_area = cross.norm();
  if (!(two_area > 0.0)) throw MeshError("element frame on a zero-area triangle");
  TriFrame f;
  f.area = 0.5 * two_area;
  f.normal = cross / two_area;
  const Vec3 opposite[3] = {p2 - p1, p0 - p2, p1 - p0};
  for (int a = 0; a < 3; ++a) {
    f.grad_tau[a] = f.normal.cross(opposite[a]) / two_area;
  }
  return f;
}

// Exact linear-basis integrals on a tet: int lam_a lam_b = |K|(1+d_ab)/20,
// int lam_a = |K|/4, derivatives constant. Curl products reduce through
// (u x e_c).(v x e_d) = (u.v) d_cd - u_d v_c.
Mat12c element_l11(const TetFrame& k, double mu, double mu_tilde, double sigma,
                   double omega) {
  Mat12c m = Mat12c::Zero();
  const double mu_inv = 1.0 / mu;
  const double mu_tilde_inv = 1.0 / mu_tilde;
  const complexd mass_coef = complexd(0.0, -1.0) * omega * sigma;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Vec3& ga = k.grad[a];
      const Vec3& gb = k.grad[b];
      double dot = ga.dot(gb);
      double mass = k.volume * (a == b ? 2.0 : 1.0) / 20.0;
      for (int c = 0; c < 3; ++c) {
        for (int d = 0; d < 3; ++d) {
          double curl = (c == d ? dot : 0.0) - ga[d] * gb[c];
          double value = k.volume * (mu_inv * curl + mu_tilde_inv * ga[c] * gb[d]);
          complexd entry = complexd(value, 0.0);
          if (c == d) entry += mass_coef * mass;
          m(3 * a + c, 3 * b + d) = entry;
        }
      }
    }
  }
  return m;
}

Mat12x4c element_l12(const TetFrame& k, double sigma) {
  Mat12x4c m = Mat12x4c::Zero();
  const double w = k.volume / 4.0;
  for (int a = 0; a < 4; ++a) {
    for (int c = 0; c < 3; ++c) {
      for (int b = 0; b < 4; ++b) {
        m(3 * a + c, b) = complexd(-sigma * k.grad[b][c] * w, 0.0);
      }
    }
  }
  return m;
}

Mat4x12c element_l21(const TetFrame& k, double sigma) {
  Mat4x12c m = Mat4x12c::Zero();
  const double w = k.volume / 4.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int d = 0; d < 3; ++d) {
        m(a, 3 * b + d) = complexd(-sigma * k.grad[a][d] * w, 0.0);
      }
    }
  }
  return m;
}

Mat4c element_l22(const TetFrame& k, double sigma, double omega, double delta_gauge,
                  double mu) {
  Mat4c m = Mat4c::Zero();
  // -1/(i*omega) = i/omega.
  const complexd stiff_coef = complexd(0.0, sigma / omega);
  const double gauge = delta_gauge * mu * sigma;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      double mass = k.volume * (a == b ? 2.0 : 1.0) / 20.0;
      m(a, b) = stiff_coef * (k.volume * k.grad[a].dot(k.grad[b])) + gauge * mass;
    }
  }
  return m;
}

IbcElement element_ibc(const TriFrame& t, complexd z_surface, double omega) {
  if (z_surface == complexd(0.0, 0.0)) {
    throw SolverError("impedance surface term with zero surface impedance");
  }
  IbcElement e;
  e.aa.setZero();
  e.av.setZero();
  e.va.setZero();
  e.vv.setZero();

  Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - t.normal * t.normal.transpose();
  const complexd inv_z = 1.0 / z_surface;
  const complexd iw = complexd(0.0, omega);

  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      double mass = t.area * (a == b ? 2.0 : 1.0) / 12.0;
      for (int c = 0; c < 3; ++c) {
        for (int d = 0; d < 3; ++d) {
          e.aa(3 * a + c, 3 * b + d) = -iw * inv_z * mass * proj(c, d);
        }
      }
    }
  }
  const double third = t.area / 3.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        e.av(3 * a + c, b) = -inv_z * third * t.grad_tau[b][c];
        e.va(b, 3 * a + c) = -iw * inv_z * third * t.grad_tau[b][c];
      }
      e.vv(a, b) = -inv_z * t.area * t.grad_tau[a].dot(t.grad_tau[b]);
    }
  }
  return e;
}

Mat12c element_vector_mass(const TetFrame& k) {
  Mat12c m = Mat12c::Zero();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      double mass = k.volume * (a == b ? 2.0 : 1.0) / 20.0;
      for (int c = 0; c < 3; ++c) m(3 * a + c, 3 * b + c) = mass;
    }
  }
  return m;
}

}  // namespace ectsim
