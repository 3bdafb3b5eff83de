// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "ectsim/signals.hpp"

#include "ectsim/element_forms.hpp"

namespace ectsim {

PotentialSolution split_solution(std::span<const complexd> x, int n_nodes, int n_cond,
                                 double omega) {
  if (static_cast<int>(x.size()) != 3 * n_nodes + n_cond) {
    throw SolverError("split_solution: vector length does not match dof layout");
  }
  PotentialSolution sol;
  sol.omega = omega;
  sol.a.assign(x.begin(), x.begin() + 3 * n_nodes);
  sol.v_c.assign(x.begin() + 3 * n_nodes, x.end());
  return sol;
}

CVec3 curl_on_tet(const Mesh& mesh, int tet, const PotentialSolution& sol) {
  TetFrame frame = TetFrame::from(mesh, tet);
  CVec3 curl = CVec3::Zero();
  for (int a = 0; a < 4; ++a) {
    int node = mesh.tets[tet].nodes[a];
    CVec3 coeff = sol.a_at(node);
    // curl(lam_a * A_a) = grad(lam_a) x A_a for nodal coefficients.
    Vec3 g = frame.grad[a];
    curl += CVec3(g.y() * coeff.z() - g.z() * coeff.y(),
                  g.z() * coeff.x() - g.x() * coeff.z(),
                  g.x() * coeff.y() - g.y() * coeff.x());
  }
  return curl;
}

CVec3 electric_field_on_tet(const PotentialSolution& sol, const Mesh& mesh,
                            const ConductorIndexMap& cmap, int tet) {
  const auto& k = mesh.tets[tet].nodes;
  CVec3 a_mean = CVec3::Zero();
  for (int n : k) a_mean += sol.a_at(n);
  a_mean *= 0.25;
  CVec3 e = complexd(0.0, sol.omega) * a_mean;

  if (is_conductor_region(mesh.tets[tet].region)) {
    TetFrame frame = TetFrame::from(mesh, tet);
    CVec3 grad_v = CVec3::Zero();
    for (int a = 0; a < 4; ++a) {
      int dof = cmap.forward[k[a]];
      if (dof < 0) throw MeshError("conductor tet node missing from conductor map");
      grad_v += frame.grad[a].cast<complexd>() * sol.v_c[dof];
    }
    e += grad_v;
  }
  return e;
}

std::vector<CVec3> electric_field(const PotentialSolution& sol, const Mesh& mesh,
                                  const ConductorIndexMap& cmap) {
  std::vector<CVec3> e(mesh.tet_count());
  for (int t = 0; t < mesh.tet_count(); ++t) {
    e[t] = electric_field_on_tet(sol, mesh, cmap, t);
  }
  return e;
}

complexd delta_impedance(const Mesh& mesh, const ConductorIndexMap& cmap,
                         std::span<const int> defect_tets,
                         const MaterialTable& primary, const MaterialTable& reference,
                         const PotentialSolution& sol_k, const PotentialSolution& ref_l,
                         bool conjugate_pairing) {
  complexd total(0.0, 0.0);
  const complexd inv_iw = complexd(0.0, -1.0 / primary.omega);  // 1/(i*omega)
  for (int t : defect_tets) {
    RegionTag tag = mesh.tets[t].region;
    const double mu_d = primary.mu_of(tag);
    const double mu_eps = reference.mu_of(tag);
    const double sigma_d = primary.sigma_of(tag);
    const double sigma_eps = reference.sigma_of(tag);
    const double vol = mesh.tet_volume(t);

    CVec3 curl_k = curl_on_tet(mesh, t, sol_k);
    CVec3 curl_l = curl_on_tet(mesh, t, ref_l);
    CVec3 e_k = electric_field_on_tet(sol_k, mesh, cmap, t);
    CVec3 e_l = electric_field_on_tet(ref_l, mesh, cmap, t);
    if (conjugate_pairing) {
      curl_l = curl_l.conjugate();
      e_l = e_l.conjugate();
    }

    complexd curl_pair = curl_k.x() * curl_l.x() + curl_k.y() * curl_l.y() +
                         curl_k.z() * curl_l.z();
    complexd field_pair = e_k.x() * e_l.x() + e_k.y() * e_l.y() + e_k.z() * e_l.z();

    total += inv_iw * ((mu_eps - mu_d) / (mu_d * mu_eps)) * vol * curl_pair;
    total += (sigma_d - sigma_eps) * vol * field_pair;
  }
  return total;
}

SignalModes signal_modes(const DeltaZ& dz) {
  const complexd half_i(0.0, 0.5);
  SignalModes modes;
  modes.z_fa = half_i * (dz(1, 1) + dz(1, 2));
  modes.z_f3 = half_i * (dz(1, 1) - dz(2, 2));
  return modes;
}

}  // namespace ectsim
