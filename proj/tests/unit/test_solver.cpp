// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Dense>

#include <map>
#include <random>

#include "ectsim/assembly.hpp"
#include "ectsim/solver.hpp"
#include "support/test_meshes.hpp"

using namespace ectsim;

namespace {

CscMatrix csc_from_dense(const Eigen::MatrixXcd& m) {
  std::vector<Triplet> trips;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (m(i, j) != complexd(0.0, 0.0)) {
        trips.push_back({i, j, m(i, j)});
      }
    }
  }
  return CscMatrix::from_triplets(static_cast<int>(m.rows()), static_cast<int>(m.cols()), trips);
}

// Small conductor-in-vacuum system at unit physical scales; well conditioned
// enough for tight recovery checks.
struct SmallSystem {
  Mesh mesh;
  BlockSystem sys;
  GlobalSystem global;
};

SmallSystem small_eddy_system() {
  SmallSystem s;
  s.mesh = test::unit_cube_mesh(2, [](const Vec3& c) {
    return c.x() < 0.5 ? RegionTag::kTube : RegionTag::kVacuum;
  });
  ConductorIndexMap cmap = conductor_map(s.mesh);
  MaterialTable mats;
  mats.omega = 1.0;
  mats.mu_tilde = 1.0;
  mats.delta_gauge = 1e-6;
  mats.bc_penalty = 1e6;
  mats.set(RegionTag::kTube, 2.0, 1.0);
  mats.set(RegionTag::kTsp, 2.0, 1.0);
  mats.set(RegionTag::kDefect, 2.0, 1.0);
  mats.set(RegionTag::kCoil1, 0.0, 1.0);
  mats.set(RegionTag::kCoil2, 0.0, 1.0);
  mats.set(RegionTag::kVacuum, 0.0, 1.0);
  PartitionMap map = partition_tets(s.mesh, 2, 0);
  s.sys = assemble_system(s.mesh, cmap, mats, map, 1);
  apply_essential_bc(s.sys, s.mesh);
  s.global = build_global(s.sys);
  return s;
}

std::vector<complexd> random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<complexd> v(n);
  for (auto& x : v) x = complexd(dist(rng), dist(rng));
  return v;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("1x1 system") {
  CscMatrix a = CscMatrix::from_triplets(1, 1, std::vector<Triplet>{{0, 0, complexd(2.0, 0.0)}});
  Factorization f = Factorization::compute(a);
  SolveResult r = f.solve(std::vector<complexd>{complexd(4.0, 0.0)});
  CHECK(r.x[0] == complexd(2.0, 0.0));
}

TEST_CASE("dense 10x10 random complex system matches the dense oracle") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXcd m(10, 10);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) m(i, j) = complexd(dist(rng), dist(rng));
  }
  m += 10.0 * Eigen::MatrixXcd::Identity(10, 10);
  Eigen::VectorXcd b(10);
  for (int i = 0; i < 10; ++i) b(i) = complexd(dist(rng), dist(rng));

  Eigen::VectorXcd expected = m.fullPivLu().solve(b);
  Factorization f = Factorization::compute(csc_from_dense(m));
  SolveResult got = f.solve(std::span<const complexd>(b.data(), 10));
  double err = 0.0;
  for (int i = 0; i < 10; ++i) err += std::norm(got.x[i] - expected(i));
  CHECK(std::sqrt(err) / expected.norm() < 1e-10);
  CHECK(got.residual <= 1e-10);
}

TEST_CASE("an exactly empty column reports a singularity naming the dof") {
  // A scalar dof decoupled from everything: the column is structurally zero,
  // the degenerate analogue of a floating conductor island at zero gauge.
  std::vector<Triplet> trips{{0, 0, complexd(1, 0)}, {1, 1, complexd(1, 0)}};
  CscMatrix a = CscMatrix::from_triplets(3, 3, trips);
  CHECK_THROWS_WITH_AS(Factorization::compute(a), doctest::Contains("dof 2"), SolverError);
}

TEST_CASE("zero rhs gives the zero solution") {
  SmallSystem s = small_eddy_system();
  Factorization f = Factorization::compute(s.global.matrix, s.global.dof_node);
  std::vector<complexd> zero(s.sys.total_dofs(), complexd(0.0, 0.0));
  SolveResult r = f.solve(zero);
  for (const auto& v : r.x) CHECK(v == complexd(0.0, 0.0));
}

TEST_CASE("multiply-then-solve recovers a random vector to 1e-10") {
  SmallSystem s = small_eddy_system();
  Factorization f = Factorization::compute(s.global.matrix, s.global.dof_node);
  std::vector<complexd> want = random_vector(s.sys.total_dofs(), 1234);
  std::vector<complexd> b(want.size());
  s.global.matrix.multiply(want, b);
  SolveResult r = f.solve(b);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < want.size(); ++i) {
    num += std::norm(r.x[i] - want[i]);
    den += std::norm(want[i]);
  }
  CHECK(std::sqrt(num / den) < 1e-10);
  CHECK(r.residual <= 1e-10);
}

TEST_CASE("repeated solves are bitwise identical") {
  SmallSystem s = small_eddy_system();
  Factorization f = Factorization::compute(s.global.matrix, s.global.dof_node);
  std::vector<complexd> b = random_vector(s.sys.total_dofs(), 77);
  SolveResult r1 = f.solve(b);
  SolveResult r2 = f.solve(b);
  REQUIRE(r1.x.size() == r2.x.size());
  for (size_t i = 0; i < r1.x.size(); ++i) {
    CHECK(r1.x[i].real() == r2.x[i].real());
    CHECK(r1.x[i].imag() == r2.x[i].imag());
  }
}

TEST_CASE("build_global: no conductor collapses to the vector block") {
  Mesh mesh = test::unit_cube_mesh(1);
  ConductorIndexMap cmap = empty_conductor_map(mesh);
  MaterialTable mats;
  mats.omega = 1.0;
  mats.mu_tilde = 1.0;
  mats.set(RegionTag::kVacuum, 0.0, 1.0);
  mats.set(RegionTag::kCoil1, 0.0, 1.0);
  mats.set(RegionTag::kCoil2, 0.0, 1.0);
  mats.set(RegionTag::kTube, 1.0, 1.0);
  mats.set(RegionTag::kTsp, 1.0, 1.0);
  mats.set(RegionTag::kDefect, 1.0, 1.0);
  PartitionMap map = partition_tets(mesh, 1, 0);
  BlockSystem sys = assemble_system(mesh, cmap, mats, map, 1);
  CHECK(sys.n_cond == 0);
  GlobalSystem g = build_global(sys);
  CHECK(g.matrix.n_rows == 3 * mesh.node_count());
  CHECK(g.matrix.nnz() == sys.m11.nnz());
}

TEST_CASE("global dimension and nnz match an independent recount") {
  Mesh mesh = generate_tube_mesh(test::small_tube_spec(3));
  ConductorIndexMap cmap = conductor_map(mesh);
  MaterialTable mats;
  mats.omega = 1.0;
  mats.mu_tilde = 1.0;
  mats.delta_gauge = 1e-6;
  mats.bc_penalty = 1e6;
  mats.set(RegionTag::kTube, 2.0, 1.0);
  mats.set(RegionTag::kTsp, 2.0, 1.0);
  mats.set(RegionTag::kDefect, 2.0, 1.0);
  mats.set(RegionTag::kCoil1, 0.0, 1.0);
  mats.set(RegionTag::kCoil2, 0.0, 1.0);
  mats.set(RegionTag::kVacuum, 0.0, 1.0);
  PartitionMap map = partition_tets(mesh, 2, 1);
  BlockSystem sys = assemble_system(mesh, cmap, mats, map, 1);
  GlobalSystem g = build_global(sys);
  CHECK(g.matrix.n_rows == 3 * mesh.node_count() + cmap.count());

  // Recount: merge all block triplets with offsets independently.
  std::map<std::pair<int, int>, complexd> entries;
  int na = sys.a_dofs();
  for (const auto& e : sys.m11.entries) entries[{e.row, e.col}] += e.value;
  for (const auto& e : sys.m12.entries) entries[{e.row, na + e.col}] += e.value;
  for (const auto& e : sys.m21.entries) entries[{na + e.row, e.col}] += e.value;
  for (const auto& e : sys.m22.entries) entries[{na + e.row, na + e.col}] += e.value;
  CHECK(g.matrix.nnz() == entries.size());
}

TEST_CASE("iterative: identity converges in one iteration") {
  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(8, 8);
  CscMatrix a = csc_from_dense(eye);
  std::vector<complexd> b = random_vector(8, 5);
  IterativeResult r = solve_iterative(a, b, {1e-10, 50, 20});
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(r.x[i] - b[i]) < 1e-12);
}

TEST_CASE("iterative agrees with direct on a small eddy-current system") {
  SmallSystem s = small_eddy_system();
  Factorization f = Factorization::compute(s.global.matrix, s.global.dof_node);
  std::vector<complexd> rhs = assemble_rhs(s.mesh, s.mesh.region_tets(RegionTag::kVacuum),
                                           1.0, s.sys.total_dofs());
  apply_pins_to_rhs(s.sys, rhs);
  SolveResult direct = f.solve(rhs);
  IterativeResult iter = solve_iterative(s.global.matrix, rhs, {1e-12, 2000, 150});
  REQUIRE(iter.converged);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < direct.x.size(); ++i) {
    num += std::norm(direct.x[i] - iter.x[i]);
    den += std::norm(direct.x[i]);
  }
  CHECK(std::sqrt(num / den) < 1e-8);
}

TEST_CASE("iterative flags non-convergence at max_iter=1") {
  SmallSystem s = small_eddy_system();
  std::vector<complexd> b = random_vector(s.sys.total_dofs(), 3);
  IterativeResult r = solve_iterative(s.global.matrix, b, {1e-14, 1, 30});
  CHECK(!r.converged);
  CHECK(r.residual > 1e-14);
}

TEST_CASE("iterative rejects non-positive tolerance") {
  CscMatrix a = CscMatrix::from_triplets(1, 1, std::vector<Triplet>{{0, 0, complexd(1, 0)}});
  std::vector<complexd> b{complexd(1, 0)};
  CHECK_THROWS_AS(solve_iterative(a, b, {0.0, 10, 5}), SolverError);
}

}  // TEST_SUITE
