// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "ectsim/assembly.hpp"
#include "ectsim/solver.hpp"
#include "support/test_meshes.hpp"

using namespace ectsim;

namespace {

struct SolverFixture {
  Mesh mesh;
  BlockSystem sys;
  GlobalSystem global;
  std::vector<complexd> rhs;

  SolverFixture() {
    mesh = generate_tube_mesh(ectsim::test::small_tube_spec(6));
    ConductorIndexMap cmap = conductor_map(mesh);
    MaterialTable mats;
    mats.omega = 6.28e5;
    mats.mu_tilde = kMu0;
    mats.delta_gauge = 1e-6;
    mats.bc_penalty = 1e13;
    mats.sigma_eps = 1.0;
    mats.set(RegionTag::kTube, 1e6, kMu0);
    mats.set(RegionTag::kTsp, 5e6, 50 * kMu0);
    mats.set(RegionTag::kDefect, 1e6, kMu0);
    mats.set(RegionTag::kCoil1, 0.0, kMu0);
    mats.set(RegionTag::kCoil2, 0.0, kMu0);
    mats.set(RegionTag::kVacuum, 0.0, kMu0);
    PartitionMap map = partition_tets(mesh, 4, 1);
    sys = assemble_system(mesh, cmap, mats, map, 1);
    apply_essential_bc(sys, mesh);
    global = build_global(sys);
    rhs = assemble_rhs(mesh, RegionTag::kCoil1, 1.0, sys.total_dofs());
    apply_pins_to_rhs(sys, rhs);
  }
};

SolverFixture& fixture() {
  static SolverFixture f;
  return f;
}

void BM_Factorize(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    Factorization lu = Factorization::compute(f.global.matrix, f.global.dof_node);
    benchmark::DoNotOptimize(lu);
  }
}
BENCHMARK(BM_Factorize)->Unit(benchmark::kMillisecond);

void BM_Backsolve(benchmark::State& state) {
  auto& f = fixture();
  Factorization lu = Factorization::compute(f.global.matrix, f.global.dof_node);
  for (auto _ : state) {
    SolveResult r = lu.solve(f.rhs);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Backsolve)->Unit(benchmark::kMillisecond);

}  // namespace
