// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "ectsim/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace ectsim {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

struct KeyContext {
  std::string origin;
  int line = 0;
  std::string path;  // section.key

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(origin + ":" + std::to_string(line) + ": key '" + path + "': " + what);
  }
};

double parse_double(const KeyContext& ctx, const std::string& value) {
  try {
    size_t used = 0;
    double v = std::stod(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  ctx.fail("expected a number, got '" + value + "'");
}

long parse_int(const KeyContext& ctx, const std::string& value) {
  try {
    size_t used = 0;
    long v = std::stol(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  ctx.fail("expected an integer, got '" + value + "'");
}

bool parse_bool(const KeyContext& ctx, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  ctx.fail("expected true/false, got '" + value + "'");
}

// Mutable parse state: optional geometry blocks become real ones only when
// their enabling flag is set.
struct ParseState {
  RunConfig cfg;
  AnnularBox tsp_box{0.015, 0.022, -0.01, 0.01};
  bool tsp_enabled = false;
  AnnularBox defect_box{0.0108, 0.0111, -0.002, 0.002};
  bool defect_enabled = false;
  std::optional<double> coil_ref_z;
  std::optional<double> tube_z_min, tube_z_max;
};

using Setter = std::function<void(ParseState&, const KeyContext&, const std::string&)>;

const std::map<std::string, Setter>& registry() {
  static const std::map<std::string, Setter> reg = [] {
    std::map<std::string, Setter> r;
    auto dbl = [&r](const std::string& path, std::function<void(ParseState&, double)> set) {
      r[path] = [set](ParseState& s, const KeyContext& c, const std::string& v) {
        set(s, parse_double(c, v));
      };
    };
    auto integer = [&r](const std::string& path, std::function<void(ParseState&, long)> set) {
      r[path] = [set](ParseState& s, const KeyContext& c, const std::string& v) {
        set(s, parse_int(c, v));
      };
    };
    auto boolean = [&r](const std::string& path, std::function<void(ParseState&, bool)> set) {
      r[path] = [set](ParseState& s, const KeyContext& c, const std::string& v) {
        set(s, parse_bool(c, v));
      };
    };
    auto str = [&r](const std::string& path,
                    std::function<void(ParseState&, const std::string&)> set) {
      r[path] = [set](ParseState& s, const KeyContext&, const std::string& v) { set(s, v); };
    };

    str("mesh.source", [](ParseState& s, const std::string& v) { s.cfg.mesh_source = v; });
    str("mesh.file", [](ParseState& s, const std::string& v) { s.cfg.mesh_file = v; });
    integer("mesh.resolution",
            [](ParseState& s, long v) { s.cfg.geometry.resolution = static_cast<int>(v); });
    dbl("mesh.domain_radius", [](ParseState& s, double v) { s.cfg.geometry.domain_radius = v; });
    dbl("mesh.z_min", [](ParseState& s, double v) { s.cfg.geometry.z_min = v; });
    dbl("mesh.z_max", [](ParseState& s, double v) { s.cfg.geometry.z_max = v; });
    dbl("mesh.tube_r_inner", [](ParseState& s, double v) { s.cfg.geometry.tube_r_inner = v; });
    dbl("mesh.tube_r_outer", [](ParseState& s, double v) { s.cfg.geometry.tube_r_outer = v; });
    dbl("mesh.tube_z_min", [](ParseState& s, double v) { s.tube_z_min = v; });
    dbl("mesh.tube_z_max", [](ParseState& s, double v) { s.tube_z_max = v; });
    boolean("mesh.tsp", [](ParseState& s, bool v) { s.tsp_enabled = v; });
    dbl("mesh.tsp_r_inner", [](ParseState& s, double v) { s.tsp_box.r_inner = v; });
    dbl("mesh.tsp_r_outer", [](ParseState& s, double v) { s.tsp_box.r_outer = v; });
    dbl("mesh.tsp_z_min", [](ParseState& s, double v) { s.tsp_box.z_min = v; });
    dbl("mesh.tsp_z_max", [](ParseState& s, double v) { s.tsp_box.z_max = v; });
    boolean("mesh.defect", [](ParseState& s, bool v) { s.defect_enabled = v; });
    dbl("mesh.defect_r_inner", [](ParseState& s, double v) { s.defect_box.r_inner = v; });
    dbl("mesh.defect_r_outer", [](ParseState& s, double v) { s.defect_box.r_outer = v; });
    dbl("mesh.defect_z_min", [](ParseState& s, double v) { s.defect_box.z_min = v; });
    dbl("mesh.defect_z_max", [](ParseState& s, double v) { s.defect_box.z_max = v; });
    dbl("mesh.outer_radial_grading",
        [](ParseState& s, double v) { s.cfg.geometry.outer_radial_grading = v; });

    dbl("coil.r_inner", [](ParseState& s, double v) { s.cfg.geometry.coil.r_inner = v; });
    dbl("coil.r_outer", [](ParseState& s, double v) { s.cfg.geometry.coil.r_outer = v; });
    dbl("coil.height", [](ParseState& s, double v) { s.cfg.geometry.coil.height = v; });
    dbl("coil.gap", [](ParseState& s, double v) { s.cfg.geometry.coil.gap = v; });
    dbl("coil.amplitude", [](ParseState& s, double v) { s.cfg.coil_amplitude = v; });
    dbl("coil.ref_z", [](ParseState& s, double v) { s.coil_ref_z = v; });

    dbl("materials.frequency", [](ParseState& s, double v) { s.cfg.frequency = v; });
    dbl("materials.sigma_tube", [](ParseState& s, double v) { s.cfg.sigma_tube = v; });
    dbl("materials.mu_r_tube", [](ParseState& s, double v) { s.cfg.mu_r_tube = v; });
    dbl("materials.sigma_tsp", [](ParseState& s, double v) { s.cfg.sigma_tsp = v; });
    dbl("materials.mu_r_tsp", [](ParseState& s, double v) { s.cfg.mu_r_tsp = v; });
    dbl("materials.sigma_defect", [](ParseState& s, double v) { s.cfg.sigma_defect = v; });
    dbl("materials.mu_r_defect", [](ParseState& s, double v) { s.cfg.mu_r_defect = v; });
    dbl("materials.sigma_eps_ratio", [](ParseState& s, double v) { s.cfg.sigma_eps_ratio = v; });
    dbl("materials.delta_gauge", [](ParseState& s, double v) { s.cfg.delta_gauge = v; });
    dbl("materials.bc_penalty", [](ParseState& s, double v) { s.cfg.bc_penalty = v; });
    str("materials.mu_tilde_policy",
        [](ParseState& s, const std::string& v) { s.cfg.mu_tilde_policy = v; });
    dbl("materials.mu_tilde", [](ParseState& s, double v) { s.cfg.mu_tilde_fixed = v; });
    boolean("materials.ibc_tsp", [](ParseState& s, bool v) { s.cfg.ibc_tsp = v; });
    boolean("materials.l22_sigma_eps", [](ParseState& s, bool v) { s.cfg.l22_sigma_eps = v; });

    dbl("scan.z_start", [](ParseState& s, double v) { s.cfg.scan_z_start = v; });
    dbl("scan.z_end", [](ParseState& s, double v) { s.cfg.scan_z_end = v; });
    integer("scan.count", [](ParseState& s, long v) { s.cfg.scan_count = static_cast<int>(v); });
    integer("scan.parts", [](ParseState& s, long v) { s.cfg.parts = static_cast<int>(v); });
    integer("scan.seed", [](ParseState& s, long v) { s.cfg.seed = static_cast<unsigned>(v); });
    integer("scan.workers", [](ParseState& s, long v) { s.cfg.workers = static_cast<int>(v); });

    str("solver.method", [](ParseState& s, const std::string& v) { s.cfg.solver_method = v; });
    dbl("solver.tol", [](ParseState& s, double v) { s.cfg.solver_tol = v; });
    integer("solver.max_iter",
            [](ParseState& s, long v) { s.cfg.solver_max_iter = static_cast<int>(v); });
    integer("solver.restart",
            [](ParseState& s, long v) { s.cfg.solver_restart = static_cast<int>(v); });

    str("output.path", [](ParseState& s, const std::string& v) { s.cfg.output_path = v; });
    str("output.dump_blocks_dir",
        [](ParseState& s, const std::string& v) { s.cfg.dump_blocks_dir = v; });
    str("output.timing_path",
        [](ParseState& s, const std::string& v) { s.cfg.timing_path = v; });

    // Physical tag mapping for mesh files.
    auto tag = [&r](const std::string& path, RegionTag region) {
      r[path] = [region](ParseState& s, const KeyContext& c, const std::string& v) {
        int t = static_cast<int>(parse_int(c, v));
        for (auto it = s.cfg.tag_map.region_by_tag.begin();
             it != s.cfg.tag_map.region_by_tag.end();) {
          it = it->second == region ? s.cfg.tag_map.region_by_tag.erase(it) : std::next(it);
        }
        s.cfg.tag_map.region_by_tag[t] = region;
      };
    };
    auto btag = [&r](const std::string& path, BoundaryLabel label) {
      r[path] = [label](ParseState& s, const KeyContext& c, const std::string& v) {
        int t = static_cast<int>(parse_int(c, v));
        for (auto it = s.cfg.tag_map.boundary_by_tag.begin();
             it != s.cfg.tag_map.boundary_by_tag.end();) {
          it = it->second == label ? s.cfg.tag_map.boundary_by_tag.erase(it) : std::next(it);
        }
        s.cfg.tag_map.boundary_by_tag[t] = label;
      };
    };
    tag("mesh.tag_tube", RegionTag::kTube);
    tag("mesh.tag_tsp", RegionTag::kTsp);
    tag("mesh.tag_defect", RegionTag::kDefect);
    tag("mesh.tag_coil1", RegionTag::kCoil1);
    tag("mesh.tag_coil2", RegionTag::kCoil2);
    tag("mesh.tag_vacuum", RegionTag::kVacuum);
    btag("mesh.tag_outer_lateral", BoundaryLabel::kOuterLateral);
    btag("mesh.tag_outer_top", BoundaryLabel::kOuterTop);
    btag("mesh.tag_outer_bottom", BoundaryLabel::kOuterBottom);
    btag("mesh.tag_gamma", BoundaryLabel::kGamma);
    btag("mesh.tag_gamma_p", BoundaryLabel::kGammaP);
    return r;
  }();
  return reg;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("config key '" + key + "' " + what);
}

RunConfig finalize(ParseState state) {
  RunConfig& cfg = state.cfg;

  require(cfg.mesh_source == "generate" || cfg.mesh_source == "file", "mesh.source",
          "must be 'generate' or 'file'");
  if (cfg.mesh_source == "file") {
    require(!cfg.mesh_file.empty(), "mesh.file", "must name the mesh to load");
  } else {
    require(cfg.mesh_file.empty(), "mesh.file",
            "must be empty when mesh.source = generate (exactly one mesh source)");
  }
  require(cfg.frequency > 0.0, "materials.frequency", "must be positive");
  require(cfg.sigma_tube > 0.0, "materials.sigma_tube", "must be positive");
  require(cfg.mu_r_tube > 0.0, "materials.mu_r_tube", "must be positive");
  require(cfg.sigma_tsp > 0.0, "materials.sigma_tsp", "must be positive");
  require(cfg.mu_r_tsp > 0.0, "materials.mu_r_tsp", "must be positive");
  if (cfg.sigma_defect) {
    require(*cfg.sigma_defect > 0.0, "materials.sigma_defect", "must be positive");
  }
  if (cfg.mu_r_defect) {
    require(*cfg.mu_r_defect > 0.0, "materials.mu_r_defect", "must be positive");
  }
  require(cfg.sigma_eps_ratio > 0.0, "materials.sigma_eps_ratio", "must be positive");
  require(cfg.delta_gauge > 0.0 && cfg.delta_gauge < 1.0, "materials.delta_gauge",
          "must lie in (0, 1)");
  require(cfg.bc_penalty > 0.0, "materials.bc_penalty", "must be positive");
  require(cfg.mu_tilde_policy == "harmonic" || cfg.mu_tilde_policy == "fixed",
          "materials.mu_tilde_policy", "must be 'harmonic' or 'fixed'");
  if (cfg.mu_tilde_policy == "fixed") {
    require(cfg.mu_tilde_fixed > 0.0, "materials.mu_tilde", "must be positive");
  }
  require(cfg.scan_count >= 1, "scan.count", "must be >= 1");
  if (cfg.scan_count > 1) {
    require(cfg.scan_z_end > cfg.scan_z_start, "scan.z_end",
            "must exceed scan.z_start for multi-position scans");
  }
  require(cfg.parts >= 1, "scan.parts", "must be >= 1");
  require(cfg.workers >= 1, "scan.workers", "must be >= 1");
  require(cfg.solver_method == "direct" || cfg.solver_method == "iterative", "solver.method",
          "must be 'direct' or 'iterative'");
  require(cfg.solver_tol > 0.0, "solver.tol", "must be positive");
  require(cfg.solver_max_iter >= 1, "solver.max_iter", "must be >= 1");
  require(cfg.solver_restart >= 1, "solver.restart", "must be >= 1");
  require(cfg.geometry.resolution >= 1, "mesh.resolution", "must be >= 1");
  require(cfg.coil_amplitude != 0.0, "coil.amplitude", "must be nonzero");

  if (state.tsp_enabled) cfg.geometry.tsp = state.tsp_box;
  if (state.defect_enabled) cfg.geometry.defect = state.defect_box;
  cfg.geometry.tube_z_min = state.tube_z_min;
  cfg.geometry.tube_z_max = state.tube_z_max;
  cfg.geometry.coil_ref_z =
      state.coil_ref_z.value_or(0.5 * (cfg.geometry.z_min + cfg.geometry.z_max));
  cfg.geometry.scan_z = cfg.positions();
  return cfg;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  ParseState state;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": malformed section header");
      }
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty section name");
      }
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected 'key = value', got '" + s + "'");
    }
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    }
    if (section.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": key '" + key +
                        "' outside any [section]");
    }
    KeyContext ctx{origin, line_no, section + "." + key};
    auto it = registry().find(ctx.path);
    if (it == registry().end()) ctx.fail("unknown key");
    it->second(state, ctx, value);
  }
  return finalize(std::move(state));
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

std::vector<double> RunConfig::positions() const {
  std::vector<double> z(scan_count);
  for (int i = 0; i < scan_count; ++i) {
    z[i] = scan_count == 1 ? scan_z_start
                           : scan_z_start + (scan_z_end - scan_z_start) * i / (scan_count - 1);
  }
  return z;
}

MaterialTable RunConfig::material_table() const {
  MaterialTable m;
  m.omega = 2.0 * std::numbers::pi * frequency;
  m.sigma_eps = sigma_eps_ratio * sigma_tube;
  m.delta_gauge = delta_gauge;
  m.bc_penalty = bc_penalty;
  m.l22_use_sigma_eps = l22_sigma_eps;
  m.set(RegionTag::kTube, sigma_tube, kMu0 * mu_r_tube);
  m.set(RegionTag::kTsp, sigma_tsp, kMu0 * mu_r_tsp);
  m.set(RegionTag::kDefect, sigma_defect.value_or(sigma_tube),
        kMu0 * mu_r_defect.value_or(mu_r_tube));
  m.set(RegionTag::kCoil1, 0.0, kMu0);
  m.set(RegionTag::kCoil2, 0.0, kMu0);
  m.set(RegionTag::kVacuum, 0.0, kMu0);
  if (ibc_tsp) {
    // The plate volume is dismissed: assembled as vacuum, represented by the
    // surface impedance of its physical material on the plate boundary.
    m.ibc_enabled = true;
    m.z_surface = surface_impedance(m.omega, kMu0 * mu_r_tsp, sigma_tsp);
    m.set(RegionTag::kTsp, m.sigma_eps, kMu0);
  }
  return m;
}

void RunConfig::resolve_mu_tilde(MaterialTable& mats, const Mesh& mesh) const {
  mats.mu_tilde =
      mu_tilde_policy == "harmonic" ? harmonic_mu_tilde(mesh, mats) : mu_tilde_fixed;
}

namespace {

void emit(std::ostringstream& os, const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << key << " = " << buf << "\n";
}
void emit(std::ostringstream& os, const char* key, int v) { os << key << " = " << v << "\n"; }
void emit(std::ostringstream& os, const char* key, unsigned v) { os << key << " = " << v << "\n"; }
void emit(std::ostringstream& os, const char* key, bool v) {
  os << key << " = " << (v ? "true" : "false") << "\n";
}
void emit(std::ostringstream& os, const char* key, const std::string& v) {
  os << key << " = " << v << "\n";
}

}  // namespace

std::string dump_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[mesh]\n";
  emit(os, "source", c.mesh_source);
  if (!c.mesh_file.empty()) emit(os, "file", c.mesh_file);
  emit(os, "resolution", c.geometry.resolution);
  emit(os, "domain_radius", c.geometry.domain_radius);
  emit(os, "z_min", c.geometry.z_min);
  emit(os, "z_max", c.geometry.z_max);
  emit(os, "tube_r_inner", c.geometry.tube_r_inner);
  emit(os, "tube_r_outer", c.geometry.tube_r_outer);
  if (c.geometry.tube_z_min) emit(os, "tube_z_min", *c.geometry.tube_z_min);
  if (c.geometry.tube_z_max) emit(os, "tube_z_max", *c.geometry.tube_z_max);
  emit(os, "tsp", c.geometry.tsp.has_value());
  if (c.geometry.tsp) {
    emit(os, "tsp_r_inner", c.geometry.tsp->r_inner);
    emit(os, "tsp_r_outer", c.geometry.tsp->r_outer);
    emit(os, "tsp_z_min", c.geometry.tsp->z_min);
    emit(os, "tsp_z_max", c.geometry.tsp->z_max);
  }
  emit(os, "defect", c.geometry.defect.has_value());
  if (c.geometry.defect) {
    emit(os, "defect_r_inner", c.geometry.defect->r_inner);
    emit(os, "defect_r_outer", c.geometry.defect->r_outer);
    emit(os, "defect_z_min", c.geometry.defect->z_min);
    emit(os, "defect_z_max", c.geometry.defect->z_max);
  }
  emit(os, "outer_radial_grading", c.geometry.outer_radial_grading);
  for (const auto& [t, r] : c.tag_map.region_by_tag) {
    switch (r) {
      case RegionTag::kTube: emit(os, "tag_tube", t); break;
      case RegionTag::kTsp: emit(os, "tag_tsp", t); break;
      case RegionTag::kDefect: emit(os, "tag_defect", t); break;
      case RegionTag::kCoil1: emit(os, "tag_coil1", t); break;
      case RegionTag::kCoil2: emit(os, "tag_coil2", t); break;
      case RegionTag::kVacuum: emit(os, "tag_vacuum", t); break;
    }
  }
  for (const auto& [t, b] : c.tag_map.boundary_by_tag) {
    switch (b) {
      case BoundaryLabel::kOuterLateral: emit(os, "tag_outer_lateral", t); break;
      case BoundaryLabel::kOuterTop: emit(os, "tag_outer_top", t); break;
      case BoundaryLabel::kOuterBottom: emit(os, "tag_outer_bottom", t); break;
      case BoundaryLabel::kGamma: emit(os, "tag_gamma", t); break;
      case BoundaryLabel::kGammaP: emit(os, "tag_gamma_p", t); break;
    }
  }

  os << "\n[coil]\n";
  emit(os, "r_inner", c.geometry.coil.r_inner);
  emit(os, "r_outer", c.geometry.coil.r_outer);
  emit(os, "height", c.geometry.coil.height);
  emit(os, "gap", c.geometry.coil.gap);
  emit(os, "amplitude", c.coil_amplitude);
  emit(os, "ref_z", c.geometry.coil_ref_z);

  os << "\n[materials]\n";
  emit(os, "frequency", c.frequency);
  emit(os, "sigma_tube", c.sigma_tube);
  emit(os, "mu_r_tube", c.mu_r_tube);
  emit(os, "sigma_tsp", c.sigma_tsp);
  emit(os, "mu_r_tsp", c.mu_r_tsp);
  if (c.sigma_defect) emit(os, "sigma_defect", *c.sigma_defect);
  if (c.mu_r_defect) emit(os, "mu_r_defect", *c.mu_r_defect);
  emit(os, "sigma_eps_ratio", c.sigma_eps_ratio);
  emit(os, "delta_gauge", c.delta_gauge);
  emit(os, "bc_penalty", c.bc_penalty);
  emit(os, "mu_tilde_policy", c.mu_tilde_policy);
  emit(os, "mu_tilde", c.mu_tilde_fixed);
  emit(os, "ibc_tsp", c.ibc_tsp);
  emit(os, "l22_sigma_eps", c.l22_sigma_eps);

  os << "\n[scan]\n";
  emit(os, "z_start", c.scan_z_start);
  emit(os, "z_end", c.scan_z_end);
  emit(os, "count", c.scan_count);
  emit(os, "parts", c.parts);
  emit(os, "seed", c.seed);
  emit(os, "workers", c.workers);

  os << "\n[solver]\n";
  emit(os, "method", c.solver_method);
  emit(os, "tol", c.solver_tol);
  emit(os, "max_iter", c.solver_max_iter);
  emit(os, "restart", c.solver_restart);

  os << "\n[output]\n";
  emit(os, "path", c.output_path);
  if (!c.dump_blocks_dir.empty()) emit(os, "dump_blocks_dir", c.dump_blocks_dir);
  if (!c.timing_path.empty()) emit(os, "timing_path", c.timing_path);
  return os.str();
}

std::string config_hash(const RunConfig& config) {
  // Physics-relevant content only: drop [output] and the worker count.
  std::string dump = dump_config(config);
  std::istringstream in(dump);
  std::string line, hashed, section;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '[') section = line;
    if (section == "[output]") continue;
    if (section == "[scan]" && line.rfind("workers", 0) == 0) continue;
    hashed += line;
    hashed += '\n';
  }
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char ch : hashed) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", h);
  return buf;
}

}  // namespace ectsim
