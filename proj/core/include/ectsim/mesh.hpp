// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include "ectsim/types.hpp"

namespace ectsim {

struct Tet {
  std::array<int, 4> nodes;
  RegionTag region;
};

struct BoundaryFace {
  std::array<int, 3> nodes;
  BoundaryLabel label;
};

// Conforming tetrahedral mesh with tagged regions and labeled surfaces.
// Immutable once built; all solver stages share it read-only.
class Mesh {
 public:
  std::vector<Vec3> nodes;
  std::vector<Tet> tets;
  std::vector<BoundaryFace> boundary_faces;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int tet_count() const { return static_cast<int>(tets.size()); }

  double tet_volume(int t) const;
  Vec3 tet_centroid(int t) const;

  // Reorders tet nodes in place so every signed volume is positive.
  // Throws MeshError on a degenerate (zero-volume) tet.
  void canonicalize_orientation();

  double total_volume() const;
  double region_volume(RegionTag tag) const;
  std::vector<int> region_tets(RegionTag tag) const;
  bool has_region(RegionTag tag) const;
};

double signed_tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// Face-adjacency structure shared by validation, classification and
// partitioning: for every face (sorted node triple) the 1 or 2 incident tets.
struct FaceIncidence {
  std::array<int, 3> nodes;  // sorted ascending
  int tet0 = -1;
  int tet1 = -1;  // -1 when the face is exterior
};
std::vector<FaceIncidence> build_face_incidence(const Mesh& mesh);

// Labels a face ought to carry, derived from region adjacency alone.
// Exterior faces win OUTER_* labels even where a conductor touches the
// domain boundary; plate surfaces win over plain conductor interfaces.
struct FaceClassification {
  std::array<int, 3> nodes;
  BoundaryLabel label;
};
std::vector<FaceClassification> classify_boundary(const Mesh& mesh);

struct MeshDiagnostics {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

// Checks every mesh invariant: positive volumes, face conformity, tag
// validity, and boundary labels consistent with the recomputed
// classification. Reports problems instead of throwing.
MeshDiagnostics validate(const Mesh& mesh);

// Bijection between global node indices and the scalar-potential dofs that
// live on conductor-incident nodes.
struct ConductorIndexMap {
  std::vector<int> forward;  // node -> conductor dof, -1 when absent
  std::vector<int> inverse;  // conductor dof -> node
  int count() const { return static_cast<int>(inverse.size()); }
};
ConductorIndexMap conductor_map(const Mesh& mesh);

// Explicitly empty map for purely insulating problems (vector block only).
ConductorIndexMap empty_conductor_map(const Mesh& mesh);

// Connected components of the conductor-incident node set, two nodes being
// connected when they share a conductor tet. Returns one node list per
// component.
std::vector<std::vector<int>> conductor_components(const Mesh& mesh);

}  // namespace ectsim
