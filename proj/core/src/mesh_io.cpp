// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "ectsim/mesh_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace ectsim {

TagMap TagMap::canonical() {
  TagMap t;
  t.region_by_tag = {
      {1, RegionTag::kTube},  {2, RegionTag::kTsp},   {3, RegionTag::kDefect},
      {4, RegionTag::kCoil1}, {5, RegionTag::kCoil2}, {6, RegionTag::kVacuum},
  };
  t.boundary_by_tag = {
      {11, BoundaryLabel::kOuterLateral}, {12, BoundaryLabel::kOuterTop},
      {13, BoundaryLabel::kOuterBottom},  {14, BoundaryLabel::kGamma},
      {15, BoundaryLabel::kGammaP},
  };
  return t;
}

int TagMap::tag_of(RegionTag region) const {
  for (const auto& [tag, r] : region_by_tag) {
    if (r == region) return tag;
  }
  throw MeshError(std::string("no physical tag mapped for region ") + region_name(region));
}

int TagMap::tag_of(BoundaryLabel label) const {
  for (const auto& [tag, l] : boundary_by_tag) {
    if (l == label) return tag;
  }
  throw MeshError(std::string("no physical tag mapped for boundary ") + boundary_name(label));
}

namespace {

struct LineReader {
  std::istream& in;
  std::string path;
  int line_no = 0;
  std::string line;

  bool next() {
    while (std::getline(in, line)) {
      ++line_no;
      // Strip trailing CR from files written on other platforms.
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw MeshError(path + ":" + std::to_string(line_no) + ": " + what);
  }

  std::string expect_line(const char* what) {
    if (!next()) fail(std::string("unexpected end of file, expected ") + what);
    return line;
  }
};

}  // namespace

Mesh load_mesh(const std::string& path, const TagMap& tags) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file: " + path);
  LineReader reader{in, path};

  Mesh mesh;
  std::unordered_map<long long, int> node_index;  // file id -> 0-based index
  bool saw_nodes = false, saw_elements = false;

  while (reader.next()) {
    const std::string& section = reader.line;
    if (section.empty()) continue;
    if (section == "$MeshFormat") {
      std::istringstream fs(reader.expect_line("format line"));
      double version = 0.0;
      int file_type = 0, data_size = 0;
      if (!(fs >> version >> file_type >> data_size)) reader.fail("malformed $MeshFormat line");
      if (version < 2.0 || version >= 3.0 || file_type != 0) {
        reader.fail("unsupported mesh format (need ASCII v2.x)");
      }
      if (reader.expect_line("$EndMeshFormat") != "$EndMeshFormat") {
        reader.fail("missing $EndMeshFormat");
      }
    } else if (section == "$PhysicalNames") {
      // Names are informative only; tag mapping comes from configuration.
      while (reader.expect_line("$EndPhysicalNames") != "$EndPhysicalNames") {
      }
    } else if (section == "$Nodes") {
      std::istringstream hs(reader.expect_line("node count"));
      long long count = 0;
      if (!(hs >> count) || count < 0) reader.fail("malformed node count");
      mesh.nodes.reserve(static_cast<size_t>(count));
      for (long long i = 0; i < count; ++i) {
        std::istringstream ns(reader.expect_line("node line"));
        long long id = 0;
        double x = 0, y = 0, z = 0;
        if (!(ns >> id >> x >> y >> z)) reader.fail("malformed node line");
        if (node_index.count(id)) reader.fail("duplicate node id " + std::to_string(id));
        node_index[id] = static_cast<int>(mesh.nodes.size());
        mesh.nodes.emplace_back(x, y, z);
      }
      if (reader.expect_line("$EndNodes") != "$EndNodes") reader.fail("missing $EndNodes");
      saw_nodes = true;
    } else if (section == "$Elements") {
      if (!saw_nodes) reader.fail("$Elements before $Nodes");
      std::istringstream hs(reader.expect_line("element count"));
      long long count = 0;
      if (!(hs >> count) || count < 0) reader.fail("malformed element count");
      for (long long i = 0; i < count; ++i) {
        std::istringstream es(reader.expect_line("element line"));
        long long id = 0;
        int type = 0, ntags = 0;
        if (!(es >> id >> type >> ntags)) reader.fail("malformed element line");
        int physical = 0;
        for (int t = 0; t < ntags; ++t) {
          int tag = 0;
          if (!(es >> tag)) reader.fail("malformed element tags");
          if (t == 0) physical = tag;
        }
        if (ntags < 1) reader.fail("element without physical tag");
        auto read_node = [&]() {
          long long nid = 0;
          if (!(es >> nid)) reader.fail("malformed element connectivity");
          auto it = node_index.find(nid);
          if (it == node_index.end()) reader.fail("element references unknown node " +
                                                  std::to_string(nid));
          return it->second;
        };
        if (type == 2) {
          std::array<int, 3> nodes{read_node(), read_node(), read_node()};
          auto it = tags.boundary_by_tag.find(physical);
          if (it == tags.boundary_by_tag.end()) {
            reader.fail("unknown boundary physical tag " + std::to_string(physical));
          }
          mesh.boundary_faces.push_back({nodes, it->second});
        } else if (type == 4) {
          std::array<int, 4> nodes{read_node(), read_node(), read_node(), read_node()};
          auto it = tags.region_by_tag.find(physical);
          if (it == tags.region_by_tag.end()) {
            reader.fail("unknown region physical tag " + std::to_string(physical));
          }
          mesh.tets.push_back({nodes, it->second});
        } else {
          reader.fail("unsupported element type " + std::to_string(type) +
                      " (supported: 2 triangle, 4 tet)");
        }
      }
      if (reader.expect_line("$EndElements") != "$EndElements") reader.fail("missing $EndElements");
      saw_elements = true;
    } else if (section[0] == '$') {
      // Skip unknown sections up to their matching end marker.
      std::string end = "$End" + section.substr(1);
      while (reader.expect_line(end.c_str()) != end) {
      }
    } else {
      reader.fail("unexpected content outside any section: '" + section + "'");
    }
  }

  if (!saw_nodes || !saw_elements) {
    throw MeshError(path + ": missing $Nodes or $Elements section");
  }
  if (mesh.tets.empty()) throw MeshError(path + ": mesh contains no tetrahedra");

  mesh.canonicalize_orientation();
  MeshDiagnostics diag = validate(mesh);
  if (!diag.ok()) {
    throw MeshError(path + ": invalid mesh:\n" + diag.to_string());
  }
  return mesh;
}

void write_mesh(const Mesh& mesh, const std::string& path, const TagMap& tags) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open mesh file for writing: " + path);

  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$Nodes\n" << mesh.nodes.size() << "\n";
  char buf[128];
  for (size_t i = 0; i < mesh.nodes.size(); ++i) {
    const Vec3& p = mesh.nodes[i];
    std::snprintf(buf, sizeof(buf), "%zu %.17g %.17g %.17g\n", i + 1, p.x(), p.y(), p.z());
    out << buf;
  }
  out << "$EndNodes\n";

  out << "$Elements\n" << (mesh.boundary_faces.size() + mesh.tets.size()) << "\n";
  long long id = 1;
  for (const auto& f : mesh.boundary_faces) {
    int tag = tags.tag_of(f.label);
    out << id++ << " 2 2 " << tag << ' ' << tag << ' ' << f.nodes[0] + 1 << ' '
        << f.nodes[1] + 1 << ' ' << f.nodes[2] + 1 << "\n";
  }
  for (const auto& t : mesh.tets) {
    int tag = tags.tag_of(t.region);
    out << id++ << " 4 2 " << tag << ' ' << tag << ' ' << t.nodes[0] + 1 << ' '
        << t.nodes[1] + 1 << ' ' << t.nodes[2] + 1 << ' ' << t.nodes[3] + 1 << "\n";
  }
  out << "$EndElements\n";
  if (!out) throw IoError("failed writing mesh file: " + path);
}

}  // namespace ectsim
