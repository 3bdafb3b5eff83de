// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ectsim/materials.hpp"
#include "ectsim/mesh_io.hpp"
#include "ectsim/tube_mesh.hpp"

namespace ectsim {

// Parsed and validated run configuration. Flat "key = value" text with
// [section] headers; SI units throughout, frequency in Hz.
struct RunConfig {
  // [mesh]
  std::string mesh_source = "generate";  // generate | file
  std::string mesh_file;
  TagMap tag_map = TagMap::canonical();
  TubeMeshSpec geometry;

  // [materials]
  double frequency = 100e3;  // Hz
  double sigma_tube = 1e6;
  double mu_r_tube = 1.0;
  double sigma_tsp = 5e6;
  double mu_r_tsp = 50.0;
  std::optional<double> sigma_defect;  // defaults to sigma_tube
  std::optional<double> mu_r_defect;   // defaults to mu_r_tube
  double sigma_eps_ratio = 1e-6;
  double delta_gauge = 1e-6;
  double bc_penalty = 1e13;
  std::string mu_tilde_policy = "harmonic";  // harmonic | fixed
  double mu_tilde_fixed = kMu0;
  bool ibc_tsp = false;
  bool l22_sigma_eps = false;

  // [coil]
  double coil_amplitude = 1.0;

  // [scan]
  double scan_z_start = 0.0;
  double scan_z_end = 0.0;
  int scan_count = 1;
  int parts = 8;
  unsigned seed = 1;
  int workers = 1;

  // [solver]
  std::string solver_method = "direct";  // direct | iterative
  double solver_tol = 1e-8;
  int solver_max_iter = 500;
  int solver_restart = 80;

  // [output]
  std::string output_path = "trace.csv";
  std::string dump_blocks_dir;
  std::string timing_path;

  std::vector<double> positions() const;

  // Material table for the primary configuration; mu_tilde left to be
  // resolved against a mesh when the policy is "harmonic".
  MaterialTable material_table() const;
  void resolve_mu_tilde(MaterialTable& mats, const Mesh& mesh) const;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");

// Canonical text form; parse_config_text(dump_config(c)) == c.
std::string dump_config(const RunConfig& config);

// Hash over the physics-relevant keys: excludes [output] and scan.workers so
// runs differing only in worker count or destination compare equal.
std::string config_hash(const RunConfig& config);

}  // namespace ectsim
