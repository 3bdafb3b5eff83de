// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "ectsim/assembly.hpp"
#include "support/test_meshes.hpp"

using namespace ectsim;

namespace {

struct AssemblyFixture {
  Mesh mesh = generate_tube_mesh(ectsim::test::small_tube_spec(8));
  ConductorIndexMap cmap = conductor_map(mesh);
  MaterialTable mats = [] {
    MaterialTable m;
    m.omega = 6.28e5;
    m.mu_tilde = kMu0;
    m.sigma_eps = 1.0;
    m.set(RegionTag::kTube, 1e6, kMu0);
    m.set(RegionTag::kTsp, 5e6, 50 * kMu0);
    m.set(RegionTag::kDefect, 1e6, kMu0);
    m.set(RegionTag::kCoil1, 0.0, kMu0);
    m.set(RegionTag::kCoil2, 0.0, kMu0);
    m.set(RegionTag::kVacuum, 0.0, kMu0);
    return m;
  }();
};

AssemblyFixture& fixture() {
  static AssemblyFixture f;
  return f;
}

void BM_AssembleSystem(benchmark::State& state) {
  auto& f = fixture();
  int workers = static_cast<int>(state.range(0));
  PartitionMap map = partition_tets(f.mesh, 8, 1);
  for (auto _ : state) {
    BlockSystem sys = assemble_system(f.mesh, f.cmap, f.mats, map, workers);
    benchmark::DoNotOptimize(sys);
  }
  state.SetItemsProcessed(state.iterations() * f.mesh.tet_count());
}
BENCHMARK(BM_AssembleSystem)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ReduceBlocks(benchmark::State& state) {
  auto& f = fixture();
  PartitionMap map = partition_tets(f.mesh, 8, 1);
  AssemblyPlan plan = AssemblyPlan::build(f.mesh, map);
  std::vector<SparseComplexBlock> blocks;
  for (int p = 0; p < 8; ++p) {
    blocks.push_back(assemble_block(f.mesh, f.cmap, f.mats, plan, p, BlockSelector::kM11));
  }
  for (auto _ : state) {
    SparseComplexBlock merged = reduce_blocks(blocks);
    benchmark::DoNotOptimize(merged);
  }
}
BENCHMARK(BM_ReduceBlocks)->Unit(benchmark::kMillisecond);

}  // namespace
