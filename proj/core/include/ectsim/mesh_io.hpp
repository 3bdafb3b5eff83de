// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>

#include "ectsim/mesh.hpp"

namespace ectsim {

// Mapping between file physical tags and mesh regions / boundary labels.
// The canonical numbering is what the generator writes; loaders may override
// it from configuration.
struct TagMap {
  std::map<int, RegionTag> region_by_tag;
  std::map<int, BoundaryLabel> boundary_by_tag;

  static TagMap canonical();
  int tag_of(RegionTag region) const;
  int tag_of(BoundaryLabel label) const;
};

// Reads the supported Gmsh ASCII v2.2 subset: $Nodes, $Elements with element
// types 2 (3-node triangle, boundary label tag) and 4 (4-node tet, region
// tag). Node ordering is canonicalized and the result fully validated.
Mesh load_mesh(const std::string& path, const TagMap& tags = TagMap::canonical());

// Writes the same subset; load_mesh(write_mesh(m)) reproduces m up to
// canonicalized connectivity.
void write_mesh(const Mesh& mesh, const std::string& path,
                const TagMap& tags = TagMap::canonical());

}  // namespace ectsim
