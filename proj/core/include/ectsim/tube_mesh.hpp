// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "ectsim/mesh.hpp"

namespace ectsim {

// Coaxial generator/receiver coil pair riding on the probe. Coil 1 spans
// [z - gap/2 - height, z - gap/2], coil 2 mirrors it above, for a probe
// centered at z.
struct CoilPair {
  double r_inner = 0.0;
  double r_outer = 0.0;
  double height = 0.0;
  double gap = 0.0;
};

// Annular box in (r, z); models plate, defect groove and tube extents.
struct AnnularBox {
  double r_inner = 0.0;
  double r_outer = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;
};

// Parametric tube-in-cylinder geometry. The axial plane set always contains
// the coil boundaries of every scan position so per-position coil supports
// are unions of tets, and it is symmetrized about the domain midplane so a
// centered configuration meshes mirror-symmetrically.
struct TubeMeshSpec {
  double domain_radius = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;

  double tube_r_inner = 0.0;
  double tube_r_outer = 0.0;
  // Tube axial extent; defaults to the whole column (interface meets the
  // outer boundary) when unset.
  std::optional<double> tube_z_min;
  std::optional<double> tube_z_max;

  std::optional<AnnularBox> tsp;
  std::optional<AnnularBox> defect;

  CoilPair coil;
  double coil_ref_z = 0.0;          // probe position tagged COIL_1/COIL_2
  std::vector<double> scan_z;       // extra probe positions to embed

  int resolution = 8;               // angular count = 2*resolution,
                                    // base axial layer count = resolution
  double outer_radial_grading = 2.0;  // ring spacing multiplier outside the tube
};

Mesh generate_tube_mesh(const TubeMeshSpec& spec);

// Tets forming coil k's support (k in {1, 2}) for a probe centered at z,
// selected by centroid. On a generated mesh whose planes contain the coil
// boundaries this is exact.
std::vector<int> coil_support(const Mesh& mesh, const CoilPair& coil, double probe_z,
                              int which_coil);

}  // namespace ectsim
