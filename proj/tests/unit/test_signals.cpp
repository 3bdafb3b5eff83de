// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <numbers>
#include <random>

#include "ectsim/signals.hpp"
#include "support/oracles.hpp"
#include "support/test_meshes.hpp"

using namespace ectsim;

namespace {

Mesh conductor_cube(int n) {
  return test::unit_cube_mesh(n, [](const Vec3&) { return RegionTag::kTube; });
}

PotentialSolution random_solution(const Mesh& mesh, const ConductorIndexMap& cmap, double omega,
                                  unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  PotentialSolution sol;
  sol.omega = omega;
  sol.a.resize(3 * mesh.node_count());
  for (auto& v : sol.a) v = complexd(dist(rng), dist(rng));
  sol.v_c.resize(cmap.count());
  for (auto& v : sol.v_c) v = complexd(dist(rng), dist(rng));
  return sol;
}

}  // namespace

TEST_SUITE("signals") {

TEST_CASE("skin depth closed form") {
  CHECK(skin_depth(2.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

  // 100 kHz in a 1e6 S/m conductor with free-space permeability.
  double omega = 2.0 * std::numbers::pi * 100e3;
  double delta = skin_depth(omega, 4.0e-7 * std::numbers::pi, 1e6);
  CHECK(std::abs(delta - 1.5915e-3) < 1e-7);

  // Quadrupling sigma halves the depth.
  CHECK(skin_depth(3.0, 2.0, 4.0) == doctest::Approx(0.5 * skin_depth(3.0, 2.0, 1.0)));

  CHECK_THROWS_AS(skin_depth(0.0, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(skin_depth(1.0, -1.0, 1.0), ConfigError);
}

TEST_CASE("surface impedance closed form") {
  // delta * sigma = 1 at omega=2, mu=1, sigma=1.
  complexd z = surface_impedance(2.0, 1.0, 1.0);
  CHECK(std::abs(z - complexd(1.0, -1.0)) < 1e-15);

  double omega = 2.0 * std::numbers::pi * 100e3;
  double sigma = 1e6;
  double mu = 4.0e-7 * std::numbers::pi;
  complexd zs = surface_impedance(omega, mu, sigma);
  double expected = 1.0 / (skin_depth(omega, mu, sigma) * sigma);
  CHECK(std::abs(zs - expected * complexd(1.0, -1.0)) < 1e-12 * std::abs(zs));
  CHECK(std::abs(expected - 6.283e-4) < 1e-6);

  CHECK(std::abs(zs) ==
        doctest::Approx(std::sqrt(2.0) / (skin_depth(omega, mu, sigma) * sigma)).epsilon(1e-12));
}

TEST_CASE("electric field: linear potential gives a unit field") {
  Mesh mesh = conductor_cube(2);
  ConductorIndexMap cmap = conductor_map(mesh);
  PotentialSolution sol;
  sol.omega = 3.0;
  sol.a.assign(3 * mesh.node_count(), complexd(0.0, 0.0));
  sol.v_c.resize(cmap.count());
  for (int i = 0; i < cmap.count(); ++i) {
    sol.v_c[i] = complexd(mesh.nodes[cmap.inverse[i]].x(), 0.0);
  }
  for (int t = 0; t < mesh.tet_count(); ++t) {
    CVec3 e = electric_field_on_tet(sol, mesh, cmap, t);
    CHECK(std::abs(e.x() - complexd(1.0, 0.0)) < 1e-13);
    CHECK(std::abs(e.y()) < 1e-13);
    CHECK(std::abs(e.z()) < 1e-13);
  }
}

TEST_CASE("electric field: constant vector potential gives i omega a") {
  Mesh mesh = conductor_cube(1);
  ConductorIndexMap cmap = conductor_map(mesh);
  PotentialSolution sol;
  sol.omega = 2.0;
  CVec3 a(complexd(0.5, -0.25), complexd(-1.0, 0.75), complexd(0.0, 1.0));
  sol.a.resize(3 * mesh.node_count());
  for (int n = 0; n < mesh.node_count(); ++n) {
    for (int c = 0; c < 3; ++c) sol.a[3 * n + c] = a(c);
  }
  sol.v_c.assign(cmap.count(), complexd(0.0, 0.0));
  CVec3 expected = complexd(0.0, 2.0) * a;
  for (int t = 0; t < mesh.tet_count(); ++t) {
    CVec3 e = electric_field_on_tet(sol, mesh, cmap, t);
    CHECK((e - expected).norm() < 1e-14 * expected.norm());
  }
}

TEST_CASE("electric field matches an independent per-tet gradient oracle") {
  Mesh mesh = conductor_cube(2);
  ConductorIndexMap cmap = conductor_map(mesh);
  PotentialSolution sol = random_solution(mesh, cmap, 1.7, 42);
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const auto& k = mesh.tets[t].nodes;
    oracle::TetBasis basis = oracle::TetBasis::from(mesh.nodes[k[0]], mesh.nodes[k[1]],
                                                    mesh.nodes[k[2]], mesh.nodes[k[3]]);
    CVec3 expected = CVec3::Zero();
    for (int a = 0; a < 4; ++a) {
      expected += complexd(0.0, sol.omega) * 0.25 * sol.a_at(k[a]);
      expected += basis.grad(a).cast<complexd>() * sol.v_c[cmap.forward[k[a]]];
    }
    CVec3 got = electric_field_on_tet(sol, mesh, cmap, t);
    CHECK((got - expected).norm() <= 1e-13 * expected.norm());
  }
}

TEST_CASE("electric field is linear in the solution") {
  Mesh mesh = conductor_cube(2);
  ConductorIndexMap cmap = conductor_map(mesh);
  PotentialSolution s1 = random_solution(mesh, cmap, 1.3, 7);
  PotentialSolution s2 = random_solution(mesh, cmap, 1.3, 8);
  complexd alpha(0.7, -1.2);
  PotentialSolution combo = s1;
  for (size_t i = 0; i < combo.a.size(); ++i) combo.a[i] = alpha * s1.a[i] + s2.a[i];
  for (size_t i = 0; i < combo.v_c.size(); ++i) combo.v_c[i] = alpha * s1.v_c[i] + s2.v_c[i];
  for (int t = 0; t < mesh.tet_count(); ++t) {
    CVec3 lhs = electric_field_on_tet(combo, mesh, cmap, t);
    CVec3 rhs = alpha * electric_field_on_tet(s1, mesh, cmap, t) +
                electric_field_on_tet(s2, mesh, cmap, t);
    CHECK((lhs - rhs).norm() <= 1e-14 * (lhs.norm() + rhs.norm()));
  }
}

TEST_CASE("impedance variation vanishes for matched materials or empty defect") {
  Mesh mesh = conductor_cube(1);
  ConductorIndexMap cmap = conductor_map(mesh);
  MaterialTable mats;
  mats.omega = 2.0;
  mats.set(RegionTag::kTube, 3.0, 1.5);
  PotentialSolution s1 = random_solution(mesh, cmap, mats.omega, 1);
  PotentialSolution s2 = random_solution(mesh, cmap, mats.omega, 2);

  std::vector<int> all_tets;
  for (int t = 0; t < mesh.tet_count(); ++t) all_tets.push_back(t);
  CHECK(delta_impedance(mesh, cmap, all_tets, mats, mats, s1, s2) == complexd(0.0, 0.0));
  MaterialTable other = mats;
  other.set(RegionTag::kTube, 0.1, 2.5);
  CHECK(delta_impedance(mesh, cmap, std::vector<int>{}, mats, other, s1, s2) ==
        complexd(0.0, 0.0));
}

TEST_CASE("impedance variation matches a single-tet hand evaluation") {
  // One reference tet, linear fields chosen for easy constant curls/fields.
  Mesh mesh;
  mesh.nodes = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  mesh.tets = {{{0, 1, 2, 3}, RegionTag::kDefect}};
  for (const auto& fc : classify_boundary(mesh)) mesh.boundary_faces.push_back({fc.nodes, fc.label});
  ConductorIndexMap cmap = conductor_map(mesh);

  const double omega = 2.0;
  MaterialTable primary;
  primary.omega = omega;
  primary.set(RegionTag::kDefect, 5.0, 2.0);  // sigma_d, mu_d
  MaterialTable reference;
  reference.omega = omega;
  reference.set(RegionTag::kDefect, 0.5, 1.0);  // sigma_eps, mu_eps

  // A_k(x) = (z, 0, 0): curl = (0, 1, 0); nodal mean = (1/4, 0, 0).
  PotentialSolution sol_k;
  sol_k.omega = omega;
  sol_k.a.assign(12, complexd(0.0, 0.0));
  for (int n = 0; n < 4; ++n) sol_k.a[3 * n] = complexd(mesh.nodes[n].z(), 0.0);
  sol_k.v_c = {complexd(0, 0), complexd(1, 0), complexd(0, 0), complexd(0, 0)};  // V = x
  // A_l(x) = (0, x, 0): curl = (0, 0, 1); nodal mean = (0, 1/4, 0).
  PotentialSolution ref_l;
  ref_l.omega = omega;
  ref_l.a.assign(12, complexd(0.0, 0.0));
  for (int n = 0; n < 4; ++n) ref_l.a[3 * n + 1] = complexd(mesh.nodes[n].x(), 0.0);
  ref_l.v_c = {complexd(0, 0), complexd(0, 0), complexd(0, 0), complexd(2, 0)};  // V = 2z

  std::vector<int> defect{0};
  complexd got = delta_impedance(mesh, cmap, defect, primary, reference, sol_k, ref_l);

  // Hand evaluation: |K| = 1/6; curl pairing (0,1,0).(0,0,1) = 0;
  // E_k = (1 + i w/4, 0, 0), E_l = (0, i w/4, 2): both pairings vanish.
  CHECK(std::abs(got) < 1e-15);
  complexd e_kx = complexd(1.0, omega * 0.25);

  // Now pair A_k with itself so both terms are nonzero and hand-computable.
  complexd got_self = delta_impedance(mesh, cmap, defect, primary, reference, sol_k, sol_k);
  complexd inv_iw(0.0, -1.0 / omega);
  double mu_d = 2.0, mu_eps = 1.0;
  complexd curl_term = inv_iw * ((mu_eps - mu_d) / (mu_d * mu_eps)) * (1.0 / 6.0) *
                       complexd(1.0, 0.0);  // curl.curl = 1
  complexd e_sq = e_kx * e_kx;
  complexd field_term = (5.0 - 0.5) * (1.0 / 6.0) * e_sq;
  CHECK(std::abs(got_self - (curl_term + field_term)) <= 1e-13 * std::abs(got_self));
}

TEST_CASE("conjugated pairing variant conjugates the reference field") {
  Mesh mesh = conductor_cube(1);
  for (auto& t : mesh.tets) t.region = RegionTag::kDefect;
  mesh.boundary_faces.clear();
  for (const auto& fc : classify_boundary(mesh)) mesh.boundary_faces.push_back({fc.nodes, fc.label});
  ConductorIndexMap cmap = conductor_map(mesh);
  MaterialTable primary;
  primary.omega = 1.0;
  primary.set(RegionTag::kDefect, 2.0, 1.0);
  MaterialTable reference;
  reference.omega = 1.0;
  reference.set(RegionTag::kDefect, 1.0, 1.0);
  PotentialSolution s1 = random_solution(mesh, cmap, 1.0, 11);
  PotentialSolution s2 = random_solution(mesh, cmap, 1.0, 12);
  std::vector<int> defect;
  for (int t = 0; t < mesh.tet_count(); ++t) defect.push_back(t);

  complexd plain = delta_impedance(mesh, cmap, defect, primary, reference, s1, s2, false);
  complexd conj = delta_impedance(mesh, cmap, defect, primary, reference, s1, s2, true);
  CHECK(plain != conj);

  // Conjugating the reference solution data reproduces the plain pairing.
  PotentialSolution s2c = s2;
  for (auto& v : s2c.a) v = std::conj(v);
  for (auto& v : s2c.v_c) v = std::conj(v);
  complexd cross = delta_impedance(mesh, cmap, defect, primary, reference, s1, s2c, true);
  CHECK(std::abs(cross - plain) <= 1e-12 * std::abs(plain));
}

TEST_CASE("signal modes") {
  DeltaZ zero;
  SignalModes m0 = signal_modes(zero);
  CHECK(m0.z_fa == complexd(0.0, 0.0));
  CHECK(m0.z_f3 == complexd(0.0, 0.0));

  DeltaZ sym;
  sym.z[0][0] = complexd(1.5, -2.0);
  sym.z[1][1] = complexd(1.5, -2.0);
  CHECK(signal_modes(sym).z_f3 == complexd(0.0, 0.0));

  DeltaZ dz;
  dz.z[0][0] = complexd(2.0, 0.0);
  dz.z[0][1] = complexd(4.0, 0.0);
  SignalModes m = signal_modes(dz);
  CHECK(m.z_fa == complexd(0.0, 3.0));
}

}  // TEST_SUITE
