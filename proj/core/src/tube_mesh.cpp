// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "ectsim/tube_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace ectsim {

namespace {

struct Tri2d {
  std::array<int, 3> v;
};

// Structured cross-section of the enclosing disk: a center node, concentric
// rings sharing one angular count, fan triangles inside the first ring and
// split quads between rings.
struct CrossSection {
  std::vector<double> xs, ys;    // 2d node coordinates
  std::vector<double> radius;    // nominal ring radius per node (0 for center)
  std::vector<Tri2d> tris;
  int count() const { return static_cast<int>(xs.size()); }
};

CrossSection build_cross_section(const std::vector<double>& rings, int n_theta) {
  CrossSection cs;
  cs.xs.push_back(0.0);
  cs.ys.push_back(0.0);
  cs.radius.push_back(0.0);
  for (double r : rings) {
    for (int k = 0; k < n_theta; ++k) {
      double theta = 2.0 * std::numbers::pi * k / n_theta;
      cs.xs.push_back(r * std::cos(theta));
      cs.ys.push_back(r * std::sin(theta));
      cs.radius.push_back(r);
    }
  }
  auto ring_node = [&](int ring, int k) { return 1 + ring * n_theta + (k % n_theta); };

  for (int k = 0; k < n_theta; ++k) {
    cs.tris.push_back({{0, ring_node(0, k), ring_node(0, k + 1)}});
  }
  const int n_rings = static_cast<int>(rings.size());
  for (int j = 0; j + 1 < n_rings; ++j) {
    for (int k = 0; k < n_theta; ++k) {
      int a = ring_node(j, k);
      int b = ring_node(j, k + 1);
      int c = ring_node(j + 1, k + 1);
      int d = ring_node(j + 1, k);
      cs.tris.push_back({{a, b, c}});
      cs.tris.push_back({{a, c, d}});
    }
  }
  return cs;
}

void append_filled(std::vector<double>& out, double lo, double hi, double target) {
  int intervals = std::max(1, static_cast<int>(std::lround((hi - lo) / target)));
  for (int i = 1; i < intervals; ++i) {
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / intervals);
  }
  out.push_back(hi);
}

std::vector<double> dedup_sorted(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  for (double v : values) {
    if (out.empty() || v - out.back() > tol) out.push_back(v);
  }
  return out;
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0)) throw MeshError(std::string("degenerate geometry: ") + what +
                                  " must be positive");
}

}  // namespace

Mesh generate_tube_mesh(const TubeMeshSpec& spec) {
  if (spec.resolution < 1) throw MeshError("resolution below 1");
  check_positive(spec.domain_radius, "domain_radius");
  check_positive(spec.z_max - spec.z_min, "z extent");
  check_positive(spec.coil.r_inner, "coil inner radius");
  const double tube_z0 = spec.tube_z_min.value_or(spec.z_min);
  const double tube_z1 = spec.tube_z_max.value_or(spec.z_max);

  // Radii must be strictly ordered: bore coil < tube wall < (plate) < domain.
  std::vector<double> ordered{spec.coil.r_inner, spec.coil.r_outer, spec.tube_r_inner,
                              spec.tube_r_outer};
  if (spec.tsp) {
    ordered.push_back(spec.tsp->r_inner);
    ordered.push_back(spec.tsp->r_outer);
  }
  ordered.push_back(spec.domain_radius);
  for (size_t i = 0; i + 1 < ordered.size(); ++i) {
    if (!(ordered[i] < ordered[i + 1])) {
      throw MeshError("degenerate geometry: radii must be strictly increasing "
                      "(coil < tube < plate < domain)");
    }
  }
  if (spec.defect) {
    if (!(spec.defect->r_inner >= spec.tube_r_inner && spec.defect->r_outer <= spec.tube_r_outer &&
          spec.defect->r_inner < spec.defect->r_outer)) {
      throw MeshError("degenerate geometry: defect radii must lie within the tube wall");
    }
    if (!(spec.defect->z_min >= tube_z0 && spec.defect->z_max <= tube_z1 &&
          spec.defect->z_min < spec.defect->z_max)) {
      throw MeshError("degenerate geometry: defect z-extent must lie within the tube");
    }
  }
  if (spec.tsp && !(spec.tsp->z_min < spec.tsp->z_max && spec.tsp->z_min >= spec.z_min &&
                    spec.tsp->z_max <= spec.z_max)) {
    throw MeshError("degenerate geometry: plate z-extent must lie within the domain");
  }

  // Mandatory ring radii, then filler rings down to the target spacing
  // (coarsened outside the tube wall).
  std::set<double> mandatory{spec.coil.r_inner, spec.coil.r_outer, spec.tube_r_inner,
                             spec.tube_r_outer, spec.domain_radius};
  if (spec.tsp) {
    mandatory.insert(spec.tsp->r_inner);
    mandatory.insert(spec.tsp->r_outer);
  }
  if (spec.defect) {
    mandatory.insert(spec.defect->r_inner);
    mandatory.insert(spec.defect->r_outer);
  }
  const double base_dr = spec.domain_radius / (2.0 * spec.resolution);
  std::vector<double> rings;
  double prev = 0.0;
  for (double r : mandatory) {
    double target = base_dr * (prev >= spec.tube_r_outer ? spec.outer_radial_grading : 1.0);
    append_filled(rings, prev, r, target);
    prev = r;
  }
  rings = dedup_sorted(rings, 1e-12 * spec.domain_radius);

  const int n_theta = 2 * spec.resolution;
  CrossSection cs = build_cross_section(rings, n_theta);

  // Axial planes: every geometric break and the coil boundaries of every
  // probe position, symmetrized about the midplane so centered
  // configurations mesh mirror-symmetrically.
  const double z_mid = 0.5 * (spec.z_min + spec.z_max);
  std::vector<double> planes{spec.z_min, z_mid};
  auto add_plane = [&](double z, const char* what) {
    if (z < spec.z_min - 1e-12 || z > spec.z_max + 1e-12) {
      throw MeshError(std::string("degenerate geometry: ") + what + " outside the domain");
    }
    planes.push_back(std::min(z, spec.z_min + spec.z_max - z));  // fold into lower half
  };
  if (tube_z0 > spec.z_min) add_plane(tube_z0, "tube z_min");
  if (tube_z1 < spec.z_max) add_plane(tube_z1, "tube z_max");
  if (spec.tsp) {
    add_plane(spec.tsp->z_min, "plate z_min");
    add_plane(spec.tsp->z_max, "plate z_max");
  }
  if (spec.defect) {
    add_plane(spec.defect->z_min, "defect z_min");
    add_plane(spec.defect->z_max, "defect z_max");
  }
  check_positive(spec.coil.r_outer - spec.coil.r_inner, "coil radial thickness");
  check_positive(spec.coil.height, "coil height");
  if (spec.coil.gap < 0.0) throw MeshError("degenerate geometry: coil gap must be >= 0");
  std::vector<double> probe_positions = spec.scan_z;
  probe_positions.push_back(spec.coil_ref_z);
  for (double p : probe_positions) {
    add_plane(p - 0.5 * spec.coil.gap - spec.coil.height, "coil bottom plane");
    add_plane(p - 0.5 * spec.coil.gap, "coil plane");
    add_plane(p + 0.5 * spec.coil.gap, "coil plane");
    add_plane(p + 0.5 * spec.coil.gap + spec.coil.height, "coil top plane");
  }

  const double z_len = spec.z_max - spec.z_min;
  std::vector<double> lower = dedup_sorted(planes, 1e-12 * z_len);
  // Filler planes in the lower half at the base axial spacing.
  const double dz_target = z_len / std::max(2, spec.resolution);
  std::vector<double> filled{lower.front()};
  for (size_t i = 0; i + 1 < lower.size(); ++i) {
    append_filled(filled, lower[i], lower[i + 1], dz_target);
  }
  lower = dedup_sorted(filled, 1e-12 * z_len);

  // Full level set: lower half plus its exact mirror.
  std::vector<double> levels = lower;
  for (int i = static_cast<int>(lower.size()) - 2; i >= 0; --i) {
    levels.push_back(spec.z_min + spec.z_max - lower[i]);
  }
  const int n_levels = static_cast<int>(levels.size());
  const int n_layers = n_levels - 1;
  const int half_layers = static_cast<int>(lower.size()) - 1;

  Mesh mesh;
  mesh.nodes.reserve(static_cast<size_t>(n_levels) * cs.count());
  for (int l = 0; l < n_levels; ++l) {
    for (int i = 0; i < cs.count(); ++i) {
      mesh.nodes.emplace_back(cs.xs[i], cs.ys[i], levels[l]);
    }
  }
  auto node3d = [&](int level, int i2d) { return level * cs.count() + i2d; };

  // Lower-half prisms split by the sorted-vertex rule; upper-half layers are
  // the exact mirror image of their lower counterparts, so the two halves
  // conform across the midplane and the mesh is z-mirror symmetric.
  mesh.tets.reserve(static_cast<size_t>(n_layers) * cs.tris.size() * 3);
  for (int layer = 0; layer < n_layers; ++layer) {
    const bool mirrored = layer >= half_layers;
    const int src_layer = mirrored ? n_layers - 1 - layer : layer;
    for (const auto& tri : cs.tris) {
      std::array<int, 3> s = tri.v;
      std::sort(s.begin(), s.end());
      int bot = src_layer, top = src_layer + 1;
      std::array<std::array<int, 4>, 3> prism_tets{{
          {{node3d(bot, s[0]), node3d(bot, s[1]), node3d(bot, s[2]), node3d(top, s[2])}},
          {{node3d(bot, s[0]), node3d(bot, s[1]), node3d(top, s[2]), node3d(top, s[1])}},
          {{node3d(bot, s[0]), node3d(top, s[1]), node3d(top, s[2]), node3d(top, s[0])}},
      }};
      for (auto tet : prism_tets) {
        if (mirrored) {
          for (int& n : tet) {
            int level = n / cs.count();
            int i2d = n % cs.count();
            n = node3d(n_layers - level, i2d);
          }
        }
        mesh.tets.push_back({tet, RegionTag::kVacuum});
      }
    }
  }
  mesh.canonicalize_orientation();

  // Region tags from centroids; every region boundary is a mesh plane or
  // ring, so centroid classification is exact.
  const double c1_lo = spec.coil_ref_z - 0.5 * spec.coil.gap - spec.coil.height;
  const double c1_hi = spec.coil_ref_z - 0.5 * spec.coil.gap;
  const double c2_lo = spec.coil_ref_z + 0.5 * spec.coil.gap;
  const double c2_hi = spec.coil_ref_z + 0.5 * spec.coil.gap + spec.coil.height;
  for (auto& tet : mesh.tets) {
    Vec3 c = 0.25 * (mesh.nodes[tet.nodes[0]] + mesh.nodes[tet.nodes[1]] +
                     mesh.nodes[tet.nodes[2]] + mesh.nodes[tet.nodes[3]]);
    double r = std::hypot(c.x(), c.y());
    double z = c.z();
    if (spec.defect && r >= spec.defect->r_inner && r <= spec.defect->r_outer &&
        z >= spec.defect->z_min && z <= spec.defect->z_max) {
      tet.region = RegionTag::kDefect;
    } else if (r >= spec.tube_r_inner && r <= spec.tube_r_outer && z >= tube_z0 && z <= tube_z1) {
      tet.region = RegionTag::kTube;
    } else if (spec.tsp && r >= spec.tsp->r_inner && r <= spec.tsp->r_outer &&
               z >= spec.tsp->z_min && z <= spec.tsp->z_max) {
      tet.region = RegionTag::kTsp;
    } else if (r >= spec.coil.r_inner && r <= spec.coil.r_outer && z >= c1_lo && z <= c1_hi) {
      tet.region = RegionTag::kCoil1;
    } else if (r >= spec.coil.r_inner && r <= spec.coil.r_outer && z >= c2_lo && z <= c2_hi) {
      tet.region = RegionTag::kCoil2;
    } else {
      tet.region = RegionTag::kVacuum;
    }
  }

  for (const auto& fc : classify_boundary(mesh)) {
    mesh.boundary_faces.push_back({fc.nodes, fc.label});
  }
  return mesh;
}

std::vector<int> coil_support(const Mesh& mesh, const CoilPair& coil, double probe_z,
                              int which_coil) {
  if (which_coil != 1 && which_coil != 2) {
    throw MeshError("coil_support: coil index must be 1 or 2");
  }
  double lo = which_coil == 1 ? probe_z - 0.5 * coil.gap - coil.height : probe_z + 0.5 * coil.gap;
  double hi = lo + coil.height;
  std::vector<int> out;
  for (int t = 0; t < mesh.tet_count(); ++t) {
    Vec3 c = mesh.tet_centroid(t);
    double r = std::hypot(c.x(), c.y());
    if (r >= coil.r_inner && r <= coil.r_outer && c.z() >= lo && c.z() <= hi) {
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace ectsim
