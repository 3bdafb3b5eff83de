// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ectsim/materials.hpp"
#include "ectsim/mesh.hpp"
#include "ectsim/partition.hpp"
#include "ectsim/sparse.hpp"

namespace ectsim {

enum class BlockSelector : int {
  kM11 = 0,
  kM12 = 1,
  kM21 = 2,
  kM22 = 3,
  kRhsMass = 4,
};

// Per-part work lists: tets owned by each part and, for the impedance
// surface, the boundary faces owned by the part of their lowest adjacent tet
// (each surface integral is contributed exactly once).
struct AssemblyPlan {
  std::vector<std::vector<int>> part_tets;
  std::vector<std::vector<int>> part_ibc_faces;  // indices into mesh.boundary_faces
  static AssemblyPlan build(const Mesh& mesh, const PartitionMap& map);
};

// Triplet block holding exactly the contributions of part `part`.
SparseComplexBlock assemble_block(const Mesh& mesh, const ConductorIndexMap& cmap,
                                  const MaterialTable& mats, const PartitionMap& map,
                                  int part, BlockSelector selector);
SparseComplexBlock assemble_block(const Mesh& mesh, const ConductorIndexMap& cmap,
                                  const MaterialTable& mats, const AssemblyPlan& plan,
                                  int part, BlockSelector selector);

// The merged 2x2 block system plus the essential-constraint list applied to
// its vector block.
struct BlockSystem {
  SparseComplexBlock m11, m12, m21, m22;
  int n_nodes = 0;
  int n_cond = 0;
  std::vector<int> cond_node;  // conductor dof -> mesh node
  double bc_penalty = 0.0;
  std::vector<std::pair<int, complexd>> pins;  // vector-space dof -> value

  int a_dofs() const { return 3 * n_nodes; }
  int total_dofs() const { return 3 * n_nodes + n_cond; }
};

struct AssembleTimings {
  double assemble = 0.0;
  double reduce = 0.0;
};

// Assembles all four blocks part-by-part (parts spread over `workers`
// threads) and reduces them in fixed part order, so the merged system is
// bitwise independent of the worker count.
BlockSystem assemble_system(const Mesh& mesh, const ConductorIndexMap& cmap,
                            const MaterialTable& mats, const PartitionMap& map,
                            int workers, AssembleTimings* timings = nullptr);

// Pins the normal component of the vector potential on the outer cylinder:
// z-dofs on top/bottom, x- and y-dofs on the lateral wall. The diagonal is
// overwritten with bc_penalty; rows are otherwise untouched.
void apply_essential_bc(BlockSystem& system, const Mesh& mesh);

// General penalty constraint dof := value (vector-space dof index). Call
// apply_pins_to_matrix once all pins are registered.
void pin_dof(BlockSystem& system, int dof, complexd value);
void apply_pins_to_matrix(BlockSystem& system);

// Overwrites the pinned entries of a right-hand side with penalty * value.
void apply_pins_to_rhs(const BlockSystem& system, std::span<complexd> rhs);

// Source vector for the azimuthal unit current density on a coil support:
// nodal interpolation of J_e followed by exact linear-mass integration.
// The scalar-dof tail is identically zero.
std::vector<complexd> assemble_rhs(const Mesh& mesh, std::span<const int> support_tets,
                                   double amplitude, int total_dofs);
std::vector<complexd> assemble_rhs(const Mesh& mesh, RegionTag coil_tag, double amplitude,
                                   int total_dofs);

// Single sparse matrix over vector dofs ++ scalar dofs, with the per-dof
// mesh-node map used as an ordering hint by the factorization.
struct GlobalSystem {
  CscMatrix matrix;
  std::vector<int> dof_node;
};
GlobalSystem build_global(const BlockSystem& system);

}  // namespace ectsim
