// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "ectsim/config.hpp"

using namespace ectsim;

namespace {

const char* kMinimal = R"(
[mesh]
source = generate
resolution = 3
domain_radius = 0.02
z_min = -0.03
z_max = 0.03
tube_r_inner = 0.0098
tube_r_outer = 0.0111

[coil]
r_inner = 0.006
r_outer = 0.0085
height = 0.004
gap = 0.002
)";

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config fills the documented defaults") {
  RunConfig cfg = parse_config_text(kMinimal);
  CHECK(cfg.delta_gauge == 1e-6);
  CHECK(cfg.bc_penalty == 1e13);
  CHECK(cfg.sigma_eps_ratio == 1e-6);
  CHECK(cfg.mu_tilde_policy == "harmonic");
  CHECK(cfg.solver_method == "direct");
  CHECK(cfg.scan_count == 1);
  CHECK(cfg.geometry.coil_ref_z == doctest::Approx(0.0));

  MaterialTable mats = cfg.material_table();
  CHECK(mats.sigma_eps == doctest::Approx(1.0));  // 1e-6 of 1e6
  CHECK(mats.sigma_of(RegionTag::kVacuum) == 0.0);
  CHECK(mats.omega == doctest::Approx(2.0 * 3.14159265358979 * 100e3).epsilon(1e-6));
}

TEST_CASE("negative conductivity is a semantic error naming the key") {
  std::string text = std::string(kMinimal) + "\n[materials]\nsigma_tube = -5\n";
  CHECK_THROWS_WITH_AS(parse_config_text(text), doctest::Contains("sigma_tube"), ConfigError);
}

TEST_CASE("unknown keys are rejected with their path") {
  std::string text = std::string(kMinimal) + "\n[materials]\nsigmatube = 5\n";
  CHECK_THROWS_WITH_AS(parse_config_text(text), doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text(text), doctest::Contains("materials.sigmatube"),
                       ConfigError);
}

TEST_CASE("syntax errors carry line numbers") {
  std::string text = "[mesh]\nsource generate\n";
  CHECK_THROWS_WITH_AS(parse_config_text(text, "cfg"), doctest::Contains("cfg:2:"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[mesh]\nresolution = soon\n"),
                       doctest::Contains("expected an integer"), ConfigError);
}

TEST_CASE("keys outside a section are rejected") {
  CHECK_THROWS_WITH_AS(parse_config_text("workers = 2\n"), doctest::Contains("outside"),
                       ConfigError);
}

TEST_CASE("dump round-trips to an identical config") {
  std::string text = std::string(kMinimal) +
                     "\n[mesh]\ntsp = true\ntsp_r_inner = 0.013\ntsp_r_outer = 0.018\n"
                     "tsp_z_min = -0.005\ntsp_z_max = 0.005\n"
                     "[scan]\nz_start = -0.01\nz_end = 0.01\ncount = 5\nworkers = 2\n"
                     "[materials]\nibc_tsp = true\n";
  RunConfig cfg = parse_config_text(text);
  std::string dumped = dump_config(cfg);
  RunConfig back = parse_config_text(dumped);
  CHECK(dump_config(back) == dumped);
}

TEST_CASE("exactly one mesh source") {
  std::string text = std::string(kMinimal) + "\n[mesh]\nfile = some.msh\n";
  CHECK_THROWS_WITH_AS(parse_config_text(text), doctest::Contains("exactly one mesh source"),
                       ConfigError);
}

TEST_CASE("config hash ignores worker count and output, tracks physics") {
  RunConfig a = parse_config_text(kMinimal);
  RunConfig b = a;
  b.workers = 8;
  b.output_path = "elsewhere.csv";
  CHECK(config_hash(a) == config_hash(b));
  RunConfig c = a;
  c.frequency = 200e3;
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("positions are strictly increasing") {
  std::string text = std::string(kMinimal) + "\n[scan]\nz_start = -0.01\nz_end = 0.01\ncount = 5\n";
  RunConfig cfg = parse_config_text(text);
  auto z = cfg.positions();
  REQUIRE(z.size() == 5);
  for (size_t i = 1; i < z.size(); ++i) CHECK(z[i] > z[i - 1]);

  std::string bad = std::string(kMinimal) + "\n[scan]\nz_start = 0.01\nz_end = -0.01\ncount = 5\n";
  CHECK_THROWS_WITH_AS(parse_config_text(bad), doctest::Contains("z_end"), ConfigError);
}

}  // TEST_SUITE
