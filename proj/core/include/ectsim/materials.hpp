// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include "ectsim/types.hpp"

namespace ectsim {

// Penetration depth of a time-harmonic field into a conductor.
double skin_depth(double omega, double mu, double sigma);

// Surface impedance (1 - i) / (delta * sigma) of a good conductor.
complexd surface_impedance(double omega, double mu, double sigma);

// All physical coefficients one assembly needs: per-region (sigma, mu) plus
// the global frequency, gauge/boundary penalties and the low-conductivity
// stand-in for vacuum.
struct MaterialTable {
  double omega = 0.0;                    // rad/s
  std::array<double, kRegionCount> sigma{};  // S/m
  std::array<double, kRegionCount> mu{};     // H/m
  double mu_tilde = 0.0;                 // H/m, div-div penalty weight
  double delta_gauge = 1e-6;             // scalar-potential gauge penalty
  double bc_penalty = 1e13;              // essential-BC diagonal value
  double sigma_eps = 0.0;                // vacuum pseudo-conductivity, S/m

  // Impedance boundary condition on the support-plate surface. When enabled
  // the plate volume is assembled with (sigma_eps, mu_vacuum) and the surface
  // integrals use z_surface computed from the physical plate material.
  bool ibc_enabled = false;
  complexd z_surface{0.0, 0.0};

  // Table-2-script variant: scalar-block stiffness assembled with sigma_eps
  // instead of the region sigma. Off by default.
  bool l22_use_sigma_eps = false;

  double sigma_of(RegionTag tag) const { return sigma[static_cast<int>(tag)]; }
  double mu_of(RegionTag tag) const { return mu[static_cast<int>(tag)]; }
  void set(RegionTag tag, double sigma_value, double mu_value) {
    sigma[static_cast<int>(tag)] = sigma_value;
    mu[static_cast<int>(tag)] = mu_value;
  }

  bool same_coefficients(const MaterialTable& other) const;
};

class Mesh;

// Volume-weighted harmonic mean of mu over the whole mesh.
double harmonic_mu_tilde(const Mesh& mesh, const MaterialTable& mats);

// Material configuration for the reference ("vacuum") solves: the defect
// volume and the insulator regions take the low-conductivity vacuum values.
MaterialTable reference_variant(const MaterialTable& primary);

}  // namespace ectsim
