// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "ectsim/materials.hpp"

#include <cmath>

#include "ectsim/mesh.hpp"

namespace ectsim {

double skin_depth(double omega, double mu, double sigma) {
  if (!(omega > 0.0) || !(mu > 0.0) || !(sigma > 0.0)) {
    throw ConfigError("skin_depth requires positive omega, mu, sigma");
  }
  return std::sqrt(2.0 / (omega * mu * sigma));
}

complexd surface_impedance(double omega, double mu, double sigma) {
  double delta = skin_depth(omega, mu, sigma);
  return complexd(1.0, -1.0) / (delta * sigma);
}

bool MaterialTable::same_coefficients(const MaterialTable& other) const {
  return omega == other.omega && sigma == other.sigma && mu == other.mu &&
         mu_tilde == other.mu_tilde && delta_gauge == other.delta_gauge &&
         bc_penalty == other.bc_penalty && sigma_eps == other.sigma_eps &&
         ibc_enabled == other.ibc_enabled && z_surface == other.z_surface &&
         l22_use_sigma_eps == other.l22_use_sigma_eps;
}

double harmonic_mu_tilde(const Mesh& mesh, const MaterialTable& mats) {
  double vol = 0.0;
  double weighted = 0.0;
  for (int t = 0; t < mesh.tet_count(); ++t) {
    double v = mesh.tet_volume(t);
    vol += v;
    weighted += v / mats.mu_of(mesh.tets[t].region);
  }
  if (!(weighted > 0.0)) throw ConfigError("harmonic_mu_tilde: mesh has no volume");
  return vol / weighted;
}

MaterialTable reference_variant(const MaterialTable& primary) {
  MaterialTable ref = primary;
  // Defect volume becomes "vacuum" (low conductivity, free-space mu); the
  // insulator regions pick up the same pseudo-conductivity in their mass term.
  ref.set(RegionTag::kDefect, primary.sigma_eps, kMu0);
  ref.sigma[static_cast<int>(RegionTag::kVacuum)] = primary.sigma_eps;
  ref.sigma[static_cast<int>(RegionTag::kCoil1)] = primary.sigma_eps;
  ref.sigma[static_cast<int>(RegionTag::kCoil2)] = primary.sigma_eps;
  return ref;
}

}  // namespace ectsim
