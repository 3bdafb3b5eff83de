// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "ectsim/materials.hpp"
#include "ectsim/mesh.hpp"
#include "ectsim/types.hpp"

namespace ectsim {

// Nodal potentials of one solve: complex 3-vector per node plus the scalar
// potential on conductor-incident nodes.
struct PotentialSolution {
  std::vector<complexd> a;    // 3 * n_nodes, node-major
  std::vector<complexd> v_c;  // conductor dofs
  double omega = 0.0;

  CVec3 a_at(int node) const {
    return CVec3(a[3 * node], a[3 * node + 1], a[3 * node + 2]);
  }
};

// Splits a stacked solve vector into its potential parts.
PotentialSolution split_solution(std::span<const complexd> x, int n_nodes, int n_cond,
                                 double omega);

// Per-tet constant curl of the linear vector field.
CVec3 curl_on_tet(const Mesh& mesh, int tet, const PotentialSolution& sol);

// Per-tet constant electric field i*omega*A + grad(V_c); the scalar term
// exists only on conductor tets. A enters through its nodal average.
std::vector<CVec3> electric_field(const PotentialSolution& sol, const Mesh& mesh,
                                  const ConductorIndexMap& cmap);
CVec3 electric_field_on_tet(const PotentialSolution& sol, const Mesh& mesh,
                            const ConductorIndexMap& cmap, int tet);

struct DeltaZ {
  complexd z[2][2]{};  // z[k-1][l-1]
  complexd operator()(int k, int l) const { return z[k - 1][l - 1]; }
};

// Volume impedance variation over the defect region, pairing a primary-
// configuration field with a reference-configuration field. The pairing is
// bilinear; `conjugate_pairing` switches to the sesquilinear variant.
complexd delta_impedance(const Mesh& mesh, const ConductorIndexMap& cmap,
                         std::span<const int> defect_tets,
                         const MaterialTable& primary, const MaterialTable& reference,
                         const PotentialSolution& sol_k, const PotentialSolution& ref_l,
                         bool conjugate_pairing = false);

// Absolute and differential signal modes.
struct SignalModes {
  complexd z_fa{};
  complexd z_f3{};
};
SignalModes signal_modes(const DeltaZ& dz);

// One scan sample: probe position, raw impedance variations and both modes.
struct SignalPoint {
  double z = 0.0;
  DeltaZ delta_z;
  complexd z_fa{};
  complexd z_f3{};
  bool failed = false;
};

}  // namespace ectsim
