// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "ectsim/mesh.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

namespace ectsim {

const char* region_name(RegionTag tag) {
  switch (tag) {
    case RegionTag::kTube: return "TUBE";
    case RegionTag::kTsp: return "TSP";
    case RegionTag::kDefect: return "DEFECT";
    case RegionTag::kCoil1: return "COIL_1";
    case RegionTag::kCoil2: return "COIL_2";
    case RegionTag::kVacuum: return "VACUUM";
  }
  return "?";
}

const char* boundary_name(BoundaryLabel label) {
  switch (label) {
    case BoundaryLabel::kOuterLateral: return "OUTER_LATERAL";
    case BoundaryLabel::kOuterTop: return "OUTER_TOP";
    case BoundaryLabel::kOuterBottom: return "OUTER_BOTTOM";
    case BoundaryLabel::kGamma: return "GAMMA";
    case BoundaryLabel::kGammaP: return "GAMMA_P";
  }
  return "?";
}

double signed_tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

double Mesh::tet_volume(int t) const {
  const auto& k = tets[t].nodes;
  return signed_tet_volume(nodes[k[0]], nodes[k[1]], nodes[k[2]], nodes[k[3]]);
}

Vec3 Mesh::tet_centroid(int t) const {
  const auto& k = tets[t].nodes;
  return 0.25 * (nodes[k[0]] + nodes[k[1]] + nodes[k[2]] + nodes[k[3]]);
}

void Mesh::canonicalize_orientation() {
  for (int t = 0; t < tet_count(); ++t) {
    double vol = tet_volume(t);
    if (vol < 0.0) {
      std::swap(tets[t].nodes[2], tets[t].nodes[3]);
      vol = -vol;
    }
    if (!(vol > 0.0)) {
      throw MeshError("degenerate tet " + std::to_string(t) + " (zero volume)");
    }
  }
}

double Mesh::total_volume() const {
  double v = 0.0;
  for (int t = 0; t < tet_count(); ++t) v += tet_volume(t);
  return v;
}

double Mesh::region_volume(RegionTag tag) const {
  double v = 0.0;
  for (int t = 0; t < tet_count(); ++t) {
    if (tets[t].region == tag) v += tet_volume(t);
  }
  return v;
}

std::vector<int> Mesh::region_tets(RegionTag tag) const {
  std::vector<int> out;
  for (int t = 0; t < tet_count(); ++t) {
    if (tets[t].region == tag) out.push_back(t);
  }
  return out;
}

bool Mesh::has_region(RegionTag tag) const {
  for (const auto& tet : tets) {
    if (tet.region == tag) return true;
  }
  return false;
}

namespace {

std::array<int, 3> sorted_face(int a, int b, int c) {
  std::array<int, 3> f{a, b, c};
  std::sort(f.begin(), f.end());
  return f;
}

// (face, incident tet) pairs for all 4n tet faces, sorted so equal faces are
// adjacent. Shared by incidence building and conformity checking.
struct FaceRec {
  std::array<int, 3> nodes;
  int tet;
  bool operator<(const FaceRec& o) const {
    if (nodes != o.nodes) return nodes < o.nodes;
    return tet < o.tet;
  }
};

std::vector<FaceRec> all_faces_sorted(const Mesh& mesh) {
  static constexpr int kFaceOf[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  std::vector<FaceRec> recs;
  recs.reserve(4 * mesh.tets.size());
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const auto& k = mesh.tets[t].nodes;
    for (const auto& f : kFaceOf) {
      recs.push_back({sorted_face(k[f[0]], k[f[1]], k[f[2]]), t});
    }
  }
  std::sort(recs.begin(), recs.end());
  return recs;
}

}  // namespace

std::vector<FaceIncidence> build_face_incidence(const Mesh& mesh) {
  auto recs = all_faces_sorted(mesh);
  std::vector<FaceIncidence> out;
  out.reserve(recs.size() / 2 + 4);
  size_t i = 0;
  while (i < recs.size()) {
    size_t j = i;
    while (j < recs.size() && recs[j].nodes == recs[i].nodes) ++j;
    FaceIncidence inc;
    inc.nodes = recs[i].nodes;
    inc.tet0 = recs[i].tet;
    if (j - i >= 2) inc.tet1 = recs[i + 1].tet;
    out.push_back(inc);
    i = j;
  }
  return out;
}

std::vector<FaceClassification> classify_boundary(const Mesh& mesh) {
  double z_lo = 0.0, z_hi = 0.0;
  if (!mesh.nodes.empty()) {
    z_lo = z_hi = mesh.nodes[0].z();
    for (const auto& p : mesh.nodes) {
      z_lo = std::min(z_lo, p.z());
      z_hi = std::max(z_hi, p.z());
    }
  }
  const double tol = 1e-9 * std::max(1.0, z_hi - z_lo);

  std::vector<FaceClassification> out;
  for (const auto& inc : build_face_incidence(mesh)) {
    if (inc.tet1 < 0) {
      // Exterior face; OUTER_* takes precedence even on conductor tets.
      bool top = true, bottom = true;
      for (int n : inc.nodes) {
        top = top && std::abs(mesh.nodes[n].z() - z_hi) <= tol;
        bottom = bottom && std::abs(mesh.nodes[n].z() - z_lo) <= tol;
      }
      BoundaryLabel label = top      ? BoundaryLabel::kOuterTop
                            : bottom ? BoundaryLabel::kOuterBottom
                                     : BoundaryLabel::kOuterLateral;
      out.push_back({inc.nodes, label});
      continue;
    }
    RegionTag r0 = mesh.tets[inc.tet0].region;
    RegionTag r1 = mesh.tets[inc.tet1].region;
    bool c0 = is_conductor_region(r0);
    bool c1 = is_conductor_region(r1);
    if (c0 == c1) continue;
    RegionTag conductor = c0 ? r0 : r1;
    BoundaryLabel label =
        conductor == RegionTag::kTsp ? BoundaryLabel::kGammaP : BoundaryLabel::kGamma;
    out.push_back({inc.nodes, label});
  }
  return out;
}

std::string MeshDiagnostics::to_string() const {
  std::ostringstream os;
  for (const auto& s : issues) os << s << "\n";
  return os.str();
}

MeshDiagnostics validate(const Mesh& mesh) {
  MeshDiagnostics diag;

  for (int t = 0; t < mesh.tet_count(); ++t) {
    for (int n : mesh.tets[t].nodes) {
      if (n < 0 || n >= mesh.node_count()) {
        diag.issues.push_back("tet " + std::to_string(t) + " references invalid node " +
                              std::to_string(n));
        return diag;
      }
    }
    int r = static_cast<int>(mesh.tets[t].region);
    if (r < 0 || r >= kRegionCount) {
      diag.issues.push_back("tet " + std::to_string(t) + " carries unknown region tag");
    }
    double vol = mesh.tet_volume(t);
    if (!(vol > 0.0)) {
      diag.issues.push_back("tet " + std::to_string(t) + " has non-positive volume " +
                            std::to_string(vol));
    }
  }

  // Conformity: a sorted node triple may belong to at most two tets.
  auto recs = all_faces_sorted(mesh);
  size_t i = 0;
  while (i < recs.size()) {
    size_t j = i;
    while (j < recs.size() && recs[j].nodes == recs[i].nodes) ++j;
    if (j - i > 2) {
      std::ostringstream os;
      os << "non-conforming face (" << recs[i].nodes[0] << "," << recs[i].nodes[1] << ","
         << recs[i].nodes[2] << ") shared by " << (j - i) << " tets";
      diag.issues.push_back(os.str());
    }
    i = j;
  }
  if (!diag.issues.empty()) return diag;

  // Boundary labels against the recomputed classification.
  std::map<std::array<int, 3>, BoundaryLabel> expected;
  for (const auto& fc : classify_boundary(mesh)) expected[fc.nodes] = fc.label;

  std::map<std::array<int, 3>, int> seen;
  for (size_t f = 0; f < mesh.boundary_faces.size(); ++f) {
    const auto& bf = mesh.boundary_faces[f];
    auto key = sorted_face(bf.nodes[0], bf.nodes[1], bf.nodes[2]);
    if (++seen[key] > 1) {
      diag.issues.push_back("boundary face " + std::to_string(f) + " duplicates another entry");
      continue;
    }
    int l = static_cast<int>(bf.label);
    if (l < 0 || l >= kBoundaryLabelCount) {
      diag.issues.push_back("boundary face " + std::to_string(f) + " carries unknown label");
      continue;
    }
    auto it = expected.find(key);
    if (it == expected.end()) {
      diag.issues.push_back("boundary face " + std::to_string(f) + " labeled " +
                            boundary_name(bf.label) +
                            " lies on no classified surface (misclassified)");
    } else if (it->second != bf.label) {
      diag.issues.push_back("boundary face " + std::to_string(f) + " labeled " +
                            boundary_name(bf.label) + " but classification says " +
                            boundary_name(it->second));
    }
  }
  for (const auto& [key, label] : expected) {
    if (!seen.count(key)) {
      std::ostringstream os;
      os << "surface face (" << key[0] << "," << key[1] << "," << key[2] << ") should be labeled "
         << boundary_name(label) << " but is missing";
      diag.issues.push_back(os.str());
    }
  }
  return diag;
}

ConductorIndexMap conductor_map(const Mesh& mesh) {
  ConductorIndexMap map;
  map.forward.assign(mesh.node_count(), -1);
  for (const auto& tet : mesh.tets) {
    if (!is_conductor_region(tet.region)) continue;
    for (int n : tet.nodes) map.forward[n] = 0;
  }
  for (int n = 0; n < mesh.node_count(); ++n) {
    if (map.forward[n] == 0) {
      map.forward[n] = static_cast<int>(map.inverse.size());
      map.inverse.push_back(n);
    }
  }
  if (map.inverse.empty()) {
    throw MeshError("mesh has no conductor region: scalar potential space is empty");
  }
  return map;
}

ConductorIndexMap empty_conductor_map(const Mesh& mesh) {
  ConductorIndexMap map;
  map.forward.assign(mesh.node_count(), -1);
  return map;
}

std::vector<std::vector<int>> conductor_components(const Mesh& mesh) {
  ConductorIndexMap map = conductor_map(mesh);
  const int nc = map.count();

  // Conductor-node adjacency through conductor tets.
  std::vector<std::vector<int>> adj(nc);
  for (const auto& tet : mesh.tets) {
    if (!is_conductor_region(tet.region)) continue;
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        int ca = map.forward[tet.nodes[a]];
        int cb = map.forward[tet.nodes[b]];
        adj[ca].push_back(cb);
        adj[cb].push_back(ca);
      }
    }
  }

  std::vector<int> comp(nc, -1);
  std::vector<std::vector<int>> components;
  for (int start = 0; start < nc; ++start) {
    if (comp[start] >= 0) continue;
    std::vector<int> stack{start};
    std::vector<int> members;
    comp[start] = static_cast<int>(components.size());
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      members.push_back(map.inverse[u]);
      for (int v : adj[u]) {
        if (comp[v] < 0) {
          comp[v] = comp[start];
          stack.push_back(v);
        }
      }
    }
    std::sort(members.begin(), members.end());
    components.push_back(std::move(members));
  }
  return components;
}

}  // namespace ectsim
