// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ectsim/scan.hpp"

using namespace ectsim;

namespace {

const char* kBase = R"(
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

[scan]
parts = 4
seed = 1
)";

RunConfig defect_config(int count) {
  std::string text = std::string(kBase) +
                     "\n[mesh]\ndefect = true\ndefect_r_inner = 0.0104\ndefect_r_outer = 0.0111\n"
                     "defect_z_min = -0.002\ndefect_z_max = 0.002\n"
                     "[scan]\nz_start = -0.008\nz_end = 0.006\ncount = " +
                     std::to_string(count) + "\n";
  return parse_config_text(text);
}

std::string data_rows(const std::string& path) {
  std::ifstream in(path);
  std::string line, rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') {
      rows += line;
      rows += '\n';
    }
  }
  return rows;
}

std::string temp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE("scan") {

TEST_CASE("defect-free single-position scan is an exact null") {
  std::string text = std::string(kBase) + "\n[scan]\nz_start = 0\ncount = 1\n";
  RunConfig cfg = parse_config_text(text);
  ImpedanceTrace trace = run_scan(cfg);
  REQUIRE(trace.points.size() == 1);
  CHECK(!trace.points[0].failed);
  CHECK(trace.points[0].z_fa == complexd(0.0, 0.0));
  CHECK(trace.points[0].z_f3 == complexd(0.0, 0.0));
  // One material configuration: the reference coincides with the primary.
  CHECK(trace.timing.factorizations == 1);
}

TEST_CASE("defect scan: one factorization per material configuration, worker invariance") {
  RunConfig cfg = defect_config(8);
  cfg.workers = 1;
  ScanSession session(cfg);
  CHECK(session.factorization_count() == 2);
  CHECK(!session.defect_tets().empty());

  ImpedanceTrace serial = run_scan(session, cfg, 1);
  ImpedanceTrace parallel = run_scan(session, cfg, 4);
  REQUIRE(serial.points.size() == 8);
  CHECK(max_relative_deviation(serial, parallel) <= 1e-12);
  for (const auto& p : serial.points) {
    CHECK(!p.failed);
    CHECK(std::abs(p.z_fa) > 0.0);  // the groove must produce a signal
  }
}

TEST_CASE("identical runs produce byte-identical signal rows") {
  RunConfig cfg = defect_config(3);
  ImpedanceTrace a = run_scan(cfg);
  ImpedanceTrace b = run_scan(cfg);
  std::string pa = temp_file("trace_a.csv"), pb = temp_file("trace_b.csv");
  write_trace_csv(a, pa);
  write_trace_csv(b, pb);
  CHECK(data_rows(pa) == data_rows(pb));
}

TEST_CASE("trace csv: empty trace writes a header-only file") {
  ImpedanceTrace empty;
  empty.config_hash = "deadbeef00000000";
  std::string path = temp_file("trace_empty.csv");
  write_trace_csv(empty, path);
  ImpedanceTrace back = read_trace_csv(path);
  CHECK(back.points.empty());
  CHECK(back.config_hash == "deadbeef00000000");
}

TEST_CASE("trace csv: rows are sorted by z regardless of insertion order") {
  ImpedanceTrace trace;
  for (double z : {0.02, -0.01, 0.005}) {
    SignalPoint p;
    p.z = z;
    p.z_fa = complexd(z, -z);
    trace.points.push_back(p);
  }
  std::string path = temp_file("trace_sort.csv");
  write_trace_csv(trace, path);
  ImpedanceTrace back = read_trace_csv(path);
  REQUIRE(back.points.size() == 3);
  CHECK(back.points[0].z == doctest::Approx(-0.01));
  CHECK(back.points[1].z == doctest::Approx(0.005));
  CHECK(back.points[2].z == doctest::Approx(0.02));
}

TEST_CASE("trace csv round-trips to printed precision") {
  RunConfig cfg = defect_config(3);
  ImpedanceTrace trace = run_scan(cfg);
  std::string path = temp_file("trace_rt.csv");
  write_trace_csv(trace, path);
  ImpedanceTrace back = read_trace_csv(path);
  REQUIRE(back.points.size() == trace.points.size());
  CHECK(max_relative_deviation(trace, back) < 1e-11);
  CHECK(back.config_hash == trace.config_hash);

  // Self-comparison of a written trace is exactly zero.
  CHECK(max_relative_deviation(back, back) == 0.0);
}

TEST_CASE("timing metadata round-trips and the speedup table checks configs") {
  RunConfig cfg = defect_config(3);
  ImpedanceTrace trace = run_scan(cfg);
  std::string path = temp_file("timing_1.json");
  write_timing_json(trace, path);
  TimingRecord rec = read_timing_json(path);
  CHECK(rec.workers == 1);
  CHECK(rec.config_hash == trace.config_hash);

  TimingRecord fake = rec;
  fake.workers = 4;
  fake.t_solve = rec.t_solve / 3.0;
  std::string report = speedup_report({rec, fake});
  CHECK(report.find("workers") != std::string::npos);
  CHECK(report.find("paper_ratio") != std::string::npos);

  TimingRecord wrong = fake;
  wrong.config_hash = "0000000000000000";
  CHECK_THROWS_AS(speedup_report({rec, wrong}), ConfigError);
  CHECK_THROWS_AS(speedup_report({fake}), ConfigError);  // no 1-worker baseline
}

}  // TEST_SUITE
