// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "ectsim/assembly.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include "ectsim/element_forms.hpp"
#include "ectsim/worker_pool.hpp"

namespace ectsim {

AssemblyPlan AssemblyPlan::build(const Mesh& mesh, const PartitionMap& map) {
  if (static_cast<int>(map.part_of.size()) != mesh.tet_count()) {
    throw MeshError("assembly plan: partition map does not match mesh");
  }
  AssemblyPlan plan;
  plan.part_tets.resize(map.parts);
  plan.part_ibc_faces.resize(map.parts);
  for (int t = 0; t < mesh.tet_count(); ++t) {
    plan.part_tets[map.part_of[t]].push_back(t);
  }

  // Impedance faces are owned by the part of their lowest adjacent tet so
  // each surface integral is contributed exactly once.
  bool any_ibc = false;
  for (const auto& f : mesh.boundary_faces) {
    if (f.label == BoundaryLabel::kGammaP) {
      any_ibc = true;
      break;
    }
  }
  if (any_ibc) {
    std::map<std::array<int, 3>, int> owner_tet;
    for (const auto& inc : build_face_incidence(mesh)) {
      owner_tet[inc.nodes] = inc.tet0;  // tet0 <= tet1 by construction
    }
    for (size_t f = 0; f < mesh.boundary_faces.size(); ++f) {
      const auto& bf = mesh.boundary_faces[f];
      if (bf.label != BoundaryLabel::kGammaP) continue;
      std::array<int, 3> key{bf.nodes[0], bf.nodes[1], bf.nodes[2]};
      std::sort(key.begin(), key.end());
      auto it = owner_tet.find(key);
      if (it == owner_tet.end()) {
        throw MeshError("impedance face is not a face of any tet");
      }
      plan.part_ibc_faces[map.part_of[it->second]].push_back(static_cast<int>(f));
    }
  }
  return plan;
}

namespace {

DofSpaceDesc a_space(const Mesh& mesh) {
  return {DofKind::kVectorNodal, 3 * mesh.node_count()};
}
DofSpaceDesc v_space(const ConductorIndexMap& cmap) {
  return {DofKind::kScalarConductor, cmap.count()};
}

int require_conductor_dof(const ConductorIndexMap& cmap, int node) {
  int dof = cmap.forward[node];
  if (dof < 0) throw MeshError("conductor tet touches a node missing from the conductor map");
  return dof;
}

}  // namespace

SparseComplexBlock assemble_block(const Mesh& mesh, const ConductorIndexMap& cmap,
                                  const MaterialTable& mats, const AssemblyPlan& plan,
                                  int part, BlockSelector selector) {
  if (part < 0 || part >= static_cast<int>(plan.part_tets.size())) {
    throw MeshError("assemble_block: part id out of range");
  }
  SparseComplexBlock block;
  switch (selector) {
    case BlockSelector::kM11:
    case BlockSelector::kRhsMass:
      block.rows = a_space(mesh);
      block.cols = a_space(mesh);
      break;
    case BlockSelector::kM12:
      block.rows = a_space(mesh);
      block.cols = v_space(cmap);
      break;
    case BlockSelector::kM21:
      block.rows = v_space(cmap);
      block.cols = a_space(mesh);
      break;
    case BlockSelector::kM22:
      block.rows = v_space(cmap);
      block.cols = v_space(cmap);
      break;
  }

  for (int t : plan.part_tets[part]) {
    const Tet& tet = mesh.tets[t];
    const bool conductor = is_conductor_region(tet.region);
    if (!conductor && selector != BlockSelector::kM11 && selector != BlockSelector::kRhsMass) {
      continue;
    }
    TetFrame frame = TetFrame::from(mesh, t);
    const double sigma = mats.sigma_of(tet.region);
    const double mu = mats.mu_of(tet.region);

    switch (selector) {
      case BlockSelector::kM11: {
        Mat12c m = element_l11(frame, mu, mats.mu_tilde, sigma, mats.omega);
        for (int a = 0; a < 4; ++a) {
          for (int c = 0; c < 3; ++c) {
            int row = 3 * tet.nodes[a] + c;
            for (int b = 0; b < 4; ++b) {
              for (int d = 0; d < 3; ++d) {
                block.add(row, 3 * tet.nodes[b] + d, m(3 * a + c, 3 * b + d));
              }
            }
          }
        }
        break;
      }
      case BlockSelector::kM12: {
        Mat12x4c m = element_l12(frame, sigma);
        for (int a = 0; a < 4; ++a) {
          for (int c = 0; c < 3; ++c) {
            int row = 3 * tet.nodes[a] + c;
            for (int b = 0; b < 4; ++b) {
              block.add(row, require_conductor_dof(cmap, tet.nodes[b]), m(3 * a + c, b));
            }
          }
        }
        break;
      }
      case BlockSelector::kM21: {
        Mat4x12c m = element_l21(frame, sigma);
        for (int a = 0; a < 4; ++a) {
          int row = require_conductor_dof(cmap, tet.nodes[a]);
          for (int b = 0; b < 4; ++b) {
            for (int d = 0; d < 3; ++d) {
              block.add(row, 3 * tet.nodes[b] + d, m(a, 3 * b + d));
            }
          }
        }
        break;
      }
      case BlockSelector::kM22: {
        double stiff_sigma = mats.l22_use_sigma_eps ? mats.sigma_eps : sigma;
        Mat4c m = element_l22(frame, stiff_sigma, mats.omega, mats.delta_gauge, mu);
        if (mats.l22_use_sigma_eps && mats.delta_gauge != 0.0) {
          // The gauge mass always weights the physical sigma of the region.
          Mat4c gauge = element_l22(frame, sigma, mats.omega, mats.delta_gauge, mu) -
                        element_l22(frame, sigma, mats.omega, 0.0, mu);
          m = element_l22(frame, stiff_sigma, mats.omega, 0.0, mu) + gauge;
        }
        for (int a = 0; a < 4; ++a) {
          int row = require_conductor_dof(cmap, tet.nodes[a]);
          for (int b = 0; b < 4; ++b) {
            block.add(row, require_conductor_dof(cmap, tet.nodes[b]), m(a, b));
          }
        }
        break;
      }
      case BlockSelector::kRhsMass: {
        Mat12c m = element_vector_mass(frame);
        for (int a = 0; a < 4; ++a) {
          for (int c = 0; c < 3; ++c) {
            int row = 3 * tet.nodes[a] + c;
            for (int b = 0; b < 4; ++b) {
              block.add(row, 3 * tet.nodes[b] + c, m(3 * a + c, 3 * b + c));
            }
          }
        }
        break;
      }
    }
  }

  // Surface terms of the impedance condition, per owned face.
  if (mats.ibc_enabled && selector != BlockSelector::kRhsMass) {
    for (int f : plan.part_ibc_faces[part]) {
      const BoundaryFace& bf = mesh.boundary_faces[f];
      TriFrame frame = TriFrame::from(mesh.nodes[bf.nodes[0]], mesh.nodes[bf.nodes[1]],
                                      mesh.nodes[bf.nodes[2]]);
      IbcElement e = element_ibc(frame, mats.z_surface, mats.omega);
      switch (selector) {
        case BlockSelector::kM11:
          for (int a = 0; a < 3; ++a) {
            for (int c = 0; c < 3; ++c) {
              for (int b = 0; b < 3; ++b) {
                for (int d = 0; d < 3; ++d) {
                  block.add(3 * bf.nodes[a] + c, 3 * bf.nodes[b] + d, e.aa(3 * a + c, 3 * b + d));
                }
              }
            }
          }
          break;
        case BlockSelector::kM12:
          for (int a = 0; a < 3; ++a) {
            for (int c = 0; c < 3; ++c) {
              for (int b = 0; b < 3; ++b) {
                block.add(3 * bf.nodes[a] + c, require_conductor_dof(cmap, bf.nodes[b]),
                          e.av(3 * a + c, b));
              }
            }
          }
          break;
        case BlockSelector::kM21:
          for (int a = 0; a < 3; ++a) {
            int row = require_conductor_dof(cmap, bf.nodes[a]);
            for (int b = 0; b < 3; ++b) {
              for (int d = 0; d < 3; ++d) {
                block.add(row, 3 * bf.nodes[b] + d, e.va(a, 3 * b + d));
              }
            }
          }
          break;
        case BlockSelector::kM22:
          for (int a = 0; a < 3; ++a) {
            int row = require_conductor_dof(cmap, bf.nodes[a]);
            for (int b = 0; b < 3; ++b) {
              block.add(row, require_conductor_dof(cmap, bf.nodes[b]), e.vv(a, b));
            }
          }
          break;
        default:
          break;
      }
    }
  }
  return block;
}

SparseComplexBlock assemble_block(const Mesh& mesh, const ConductorIndexMap& cmap,
                                  const MaterialTable& mats, const PartitionMap& map,
                                  int part, BlockSelector selector) {
  return assemble_block(mesh, cmap, mats, AssemblyPlan::build(mesh, map), part, selector);
}

BlockSystem assemble_system(const Mesh& mesh, const ConductorIndexMap& cmap,
                            const MaterialTable& mats, const PartitionMap& map, int workers,
                            AssembleTimings* timings) {
  AssemblyPlan plan = AssemblyPlan::build(mesh, map);
  const int parts = map.parts;

  // Per-part blocks are computed independently; the merge always runs in
  // ascending part order so the result is bitwise worker-count independent.
  auto t0 = std::chrono::steady_clock::now();
  std::vector<SparseComplexBlock> b11(parts), b12(parts), b21(parts), b22(parts);
  parallel_for(parts, workers, [&](int p) {
    b11[p] = assemble_block(mesh, cmap, mats, plan, p, BlockSelector::kM11);
    b12[p] = assemble_block(mesh, cmap, mats, plan, p, BlockSelector::kM12);
    b21[p] = assemble_block(mesh, cmap, mats, plan, p, BlockSelector::kM21);
    b22[p] = assemble_block(mesh, cmap, mats, plan, p, BlockSelector::kM22);
  });
  auto t1 = std::chrono::steady_clock::now();

  BlockSystem sys;
  sys.n_nodes = mesh.node_count();
  sys.n_cond = cmap.count();
  sys.cond_node = cmap.inverse;
  sys.bc_penalty = mats.bc_penalty;
  sys.m11 = reduce_blocks(b11);
  sys.m12 = reduce_blocks(b12);
  sys.m21 = reduce_blocks(b21);
  sys.m22 = reduce_blocks(b22);
  auto t2 = std::chrono::steady_clock::now();
  if (timings) {
    timings->assemble = std::chrono::duration<double>(t1 - t0).count();
    timings->reduce = std::chrono::duration<double>(t2 - t1).count();
  }
  return sys;
}

void pin_dof(BlockSystem& system, int dof, complexd value) {
  if (dof < 0 || dof >= system.a_dofs()) {
    throw SolverError("pin_dof: dof outside the vector space");
  }
  system.pins.emplace_back(dof, value);
}

void apply_essential_bc(BlockSystem& system, const Mesh& mesh) {
  // Every exterior face must carry an outer label.
  std::set<std::array<int, 3>> labeled;
  for (const auto& bf : mesh.boundary_faces) {
    std::array<int, 3> key{bf.nodes[0], bf.nodes[1], bf.nodes[2]};
    std::sort(key.begin(), key.end());
    labeled.insert(key);
  }
  for (const auto& inc : build_face_incidence(mesh)) {
    if (inc.tet1 < 0 && !labeled.count(inc.nodes)) {
      throw MeshError("unlabeled outer boundary face; cannot apply essential conditions");
    }
  }

  std::set<int> pinned;
  for (const auto& bf : mesh.boundary_faces) {
    if (bf.label == BoundaryLabel::kOuterTop || bf.label == BoundaryLabel::kOuterBottom) {
      for (int n : bf.nodes) pinned.insert(3 * n + 2);
    } else if (bf.label == BoundaryLabel::kOuterLateral) {
      for (int n : bf.nodes) {
        pinned.insert(3 * n);
        pinned.insert(3 * n + 1);
      }
    }
  }
  for (int dof : pinned) pin_dof(system, dof, complexd(0.0, 0.0));
  apply_pins_to_matrix(system);
}

void apply_pins_to_matrix(BlockSystem& system) {
  // Overwrite the diagonal of every pinned row; off-diagonals stay.
  if (!system.m11.canonical) system.m11.canonicalize();
  std::set<int> todo;
  for (const auto& [dof, value] : system.pins) todo.insert(dof);
  for (auto& t : system.m11.entries) {
    if (t.row == t.col && todo.count(t.row)) {
      t.value = complexd(system.bc_penalty, 0.0);
      todo.erase(t.row);
    }
  }
  for (int dof : todo) system.m11.add(dof, dof, complexd(system.bc_penalty, 0.0));
  system.m11.canonicalize();
}

void apply_pins_to_rhs(const BlockSystem& system, std::span<complexd> rhs) {
  for (const auto& [dof, value] : system.pins) {
    rhs[dof] = system.bc_penalty * value;
  }
}

std::vector<complexd> assemble_rhs(const Mesh& mesh, std::span<const int> support_tets,
                                   double amplitude, int total_dofs) {
  if (support_tets.empty()) throw MeshError("coil support is empty");
  for (int t : support_tets) {
    if (is_conductor_region(mesh.tets[t].region)) {
      throw MeshError("coil support intersects a conductor region (tet " + std::to_string(t) +
                      "); the source must be divergence-free in the insulator");
    }
  }

  // Nodal interpolation of the azimuthal unit current density on the support
  // nodes, then exact mass integration over every tet touching those nodes.
  std::vector<char> in_support_node(mesh.node_count(), 0);
  for (int t : support_tets) {
    for (int n : mesh.tets[t].nodes) in_support_node[n] = 1;
  }
  std::vector<Vec3> j_nodal(mesh.node_count(), Vec3::Zero());
  for (int n = 0; n < mesh.node_count(); ++n) {
    if (!in_support_node[n]) continue;
    double x = mesh.nodes[n].x();
    double y = mesh.nodes[n].y();
    double r = std::hypot(x, y);
    if (r > 0.0) j_nodal[n] = amplitude * Vec3(-y / r, x / r, 0.0);
  }

  std::vector<complexd> rhs(total_dofs, complexd(0.0, 0.0));
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const auto& k = mesh.tets[t].nodes;
    bool touched = false;
    for (int n : k) touched = touched || in_support_node[n];
    if (!touched) continue;
    double vol = mesh.tet_volume(t);
    for (int a = 0; a < 4; ++a) {
      Vec3 acc = Vec3::Zero();
      for (int b = 0; b < 4; ++b) {
        acc += vol * (a == b ? 2.0 : 1.0) / 20.0 * j_nodal[k[b]];
      }
      for (int c = 0; c < 3; ++c) {
        rhs[3 * k[a] + c] += complexd(acc[c], 0.0);
      }
    }
  }
  return rhs;
}

std::vector<complexd> assemble_rhs(const Mesh& mesh, RegionTag coil_tag, double amplitude,
                                   int total_dofs) {
  std::vector<int> support = mesh.region_tets(coil_tag);
  return assemble_rhs(mesh, support, amplitude, total_dofs);
}

GlobalSystem build_global(const BlockSystem& system) {
  const int na = system.a_dofs();
  const int n = system.total_dofs();
  if (system.m11.rows.size != na || system.m11.cols.size != na) {
    throw SolverError("build_global: vector block dimension mismatch");
  }
  if (system.n_cond > 0) {
    if (system.m12.rows.size != na || system.m12.cols.size != system.n_cond ||
        system.m21.rows.size != system.n_cond || system.m21.cols.size != na ||
        system.m22.rows.size != system.n_cond || system.m22.cols.size != system.n_cond) {
      throw SolverError("build_global: coupling block dimension mismatch");
    }
  } else if (!system.m12.entries.empty() || !system.m21.entries.empty() ||
             !system.m22.entries.empty()) {
    throw SolverError("build_global: coupling entries present without conductor dofs");
  }

  std::vector<Triplet> triplets;
  triplets.reserve(system.m11.nnz() + system.m12.nnz() + system.m21.nnz() + system.m22.nnz());
  for (const auto& t : system.m11.entries) triplets.push_back(t);
  for (const auto& t : system.m12.entries) triplets.push_back({t.row, na + t.col, t.value});
  for (const auto& t : system.m21.entries) triplets.push_back({na + t.row, t.col, t.value});
  for (const auto& t : system.m22.entries) triplets.push_back({na + t.row, na + t.col, t.value});

  GlobalSystem g;
  g.matrix = CscMatrix::from_triplets(n, n, triplets);
  g.dof_node.resize(n);
  for (int d = 0; d < na; ++d) g.dof_node[d] = d / 3;
  for (int d = na; d < n; ++d) {
    g.dof_node[d] =
        d - na < static_cast<int>(system.cond_node.size()) ? system.cond_node[d - na] : -1;
  }
  return g;
}

}  // namespace ectsim
