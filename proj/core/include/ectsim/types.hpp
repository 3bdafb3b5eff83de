// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace ectsim {

using complexd = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr double kMu0 = 1.25663706212e-6;  // H/m

// Volume material regions. COIL_* tets are source supports sitting in the
// insulator; they carry no conductivity of their own.
enum class RegionTag : int {
  kTube = 0,
  kTsp = 1,
  kDefect = 2,
  kCoil1 = 3,
  kCoil2 = 4,
  kVacuum = 5,
};
inline constexpr int kRegionCount = 6;

// Labeled surfaces: the exterior cylinder walls, the conductor/insulator
// interface, and the support-plate surface.
enum class BoundaryLabel : int {
  kOuterLateral = 0,
  kOuterTop = 1,
  kOuterBottom = 2,
  kGamma = 3,
  kGammaP = 4,
};
inline constexpr int kBoundaryLabelCount = 5;

// The scalar potential space lives on nodes incident to these regions.
// Membership is a property of the tags, not of the configured sigma, so the
// dof layout is identical across material configurations.
inline bool is_conductor_region(RegionTag tag) {
  return tag == RegionTag::kTube || tag == RegionTag::kTsp || tag == RegionTag::kDefect;
}

const char* region_name(RegionTag tag);
const char* boundary_name(BoundaryLabel label);

struct MeshError : std::runtime_error {
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ectsim
