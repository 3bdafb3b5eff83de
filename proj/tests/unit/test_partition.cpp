// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <set>

#include "ectsim/partition.hpp"
#include "ectsim/tube_mesh.hpp"
#include "support/test_meshes.hpp"

using namespace ectsim;

TEST_SUITE("partition") {

TEST_CASE("P=1 puts every tet in part 0") {
  Mesh mesh = test::unit_cube_mesh(2);
  PartitionMap map = partition_tets(mesh, 1, 7);
  for (int p : map.part_of) CHECK(p == 0);
  PartitionStats stats = partition_stats(map, mesh);
  CHECK(stats.imbalance == doctest::Approx(1.0));
  CHECK(stats.edge_cut == 0);
}

TEST_CASE("P equal to the tet count yields singletons") {
  Mesh mesh = test::unit_cube_mesh(1);  // 6 tets
  PartitionMap map = partition_tets(mesh, 6, 0);
  std::set<int> used(map.part_of.begin(), map.part_of.end());
  CHECK(used.size() == 6);

  // Singleton parts cut every interior dual edge.
  PartitionStats stats = partition_stats(map, mesh);
  long long interior_faces = 0;
  for (const auto& inc : build_face_incidence(mesh)) {
    if (inc.tet1 >= 0) ++interior_faces;
  }
  CHECK(stats.edge_cut == interior_faces);
}

TEST_CASE("six-tet cube with P=2 balances to 3+3") {
  Mesh mesh = test::unit_cube_mesh(1);
  PartitionMap map = partition_tets(mesh, 2, 1);
  PartitionStats stats = partition_stats(map, mesh);
  REQUIRE(stats.sizes.size() == 2);
  CHECK(stats.sizes[0] == 3);
  CHECK(stats.sizes[1] == 3);
  CHECK(parts_connected(map, mesh));
}

TEST_CASE("partitioning is deterministic for fixed inputs") {
  Mesh mesh = generate_tube_mesh(test::small_tube_spec(4));
  PartitionMap a = partition_tets(mesh, 4, 42);
  PartitionMap b = partition_tets(mesh, 4, 42);
  CHECK(a.part_of == b.part_of);
}

TEST_CASE("tube mesh at P=4 stays balanced and connected") {
  Mesh mesh = generate_tube_mesh(test::small_tube_spec(4));
  PartitionMap map = partition_tets(mesh, 4, 1);
  PartitionStats stats = partition_stats(map, mesh);
  CHECK(stats.imbalance <= 1.1);
  CHECK(parts_connected(map, mesh));
  for (int s : stats.sizes) CHECK(s > 0);
}

TEST_CASE("balance holds within 10% for P well below tet count") {
  Mesh mesh = generate_tube_mesh(test::small_tube_spec(6));
  REQUIRE(mesh.tet_count() >= 64 * 8);
  PartitionMap map = partition_tets(mesh, 8, 3);
  PartitionStats stats = partition_stats(map, mesh);
  CHECK(stats.imbalance <= 1.1);
}

TEST_CASE("part count below one is rejected") {
  Mesh mesh = test::unit_cube_mesh(1);
  CHECK_THROWS_AS(partition_tets(mesh, 0, 0), MeshError);
}

}  // TEST_SUITE
