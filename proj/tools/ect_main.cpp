// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ectsim/config.hpp"
#include "ectsim/mesh_io.hpp"
#include "ectsim/scan.hpp"
#include "ectsim/sparse.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitMesh = 3;
constexpr int kExitSolver = 4;
constexpr int kExitIo = 5;

using namespace ectsim;

int effective_workers(const RunConfig& cfg, int override_workers) {
  if (override_workers > 0) return override_workers;
  if (const char* env = std::getenv("ECT_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  return cfg.workers;
}

Mesh mesh_from_config(const RunConfig& cfg) {
  return cfg.mesh_source == "file" ? load_mesh(cfg.mesh_file, cfg.tag_map)
                                   : generate_tube_mesh(cfg.geometry);
}

std::string trace_path(const std::string& arg) {
  namespace fs = std::filesystem;
  if (fs::is_directory(arg)) return (fs::path(arg) / "trace.csv").string();
  return arg;
}

int cmd_validate_mesh(const std::string& config_path, const std::string& write_path) {
  RunConfig cfg = parse_config(config_path);
  Mesh mesh = mesh_from_config(cfg);
  MeshDiagnostics diag = validate(mesh);
  if (!write_path.empty()) write_mesh(mesh, write_path, cfg.tag_map);
  std::cout << "nodes " << mesh.node_count() << " tets " << mesh.tet_count()
            << " boundary_faces " << mesh.boundary_faces.size() << "\n";
  if (diag.ok()) {
    std::cout << "mesh OK\n";
    return kExitOk;
  }
  std::cout << diag.to_string();
  return kExitMesh;
}

int cmd_partition(const std::string& config_path, int parts_override,
                  const std::string& output) {
  RunConfig cfg = parse_config(config_path);
  if (parts_override > 0) cfg.parts = parts_override;
  Mesh mesh = mesh_from_config(cfg);
  PartitionMap map = partition_tets(mesh, cfg.parts, cfg.seed);
  PartitionStats stats = partition_stats(map, mesh);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!output.empty() && output != "-") {
    file.open(output);
    if (!file) throw IoError("cannot open partition output: " + output);
    os = &file;
  }
  for (int p : map.part_of) *os << p << "\n";
  *os << stats.to_string();
  return kExitOk;
}

int cmd_assemble(const std::string& config_path, const std::string& dump_dir,
                 int workers_override) {
  RunConfig cfg = parse_config(config_path);
  int workers = effective_workers(cfg, workers_override);
  Mesh mesh = mesh_from_config(cfg);
  ConductorIndexMap cmap = conductor_map(mesh);
  PartitionMap pmap = partition_tets(mesh, cfg.parts, cfg.seed);
  MaterialTable mats = cfg.material_table();
  cfg.resolve_mu_tilde(mats, mesh);

  AssembleTimings at;
  BlockSystem sys = assemble_system(mesh, cmap, mats, pmap, workers, &at);
  apply_essential_bc(sys, mesh);
  std::cout << "M11 " << sys.m11.rows.size << "x" << sys.m11.cols.size << " nnz "
            << sys.m11.nnz() << "\n"
            << "M12 " << sys.m12.rows.size << "x" << sys.m12.cols.size << " nnz "
            << sys.m12.nnz() << "\n"
            << "M21 " << sys.m21.rows.size << "x" << sys.m21.cols.size << " nnz "
            << sys.m21.nnz() << "\n"
            << "M22 " << sys.m22.rows.size << "x" << sys.m22.cols.size << " nnz "
            << sys.m22.nnz() << "\n";
  std::cout << "t_assemble " << at.assemble << " t_reduce " << at.reduce << " (workers "
            << workers << ", parts " << cfg.parts << ")\n";

  std::string dir = !dump_dir.empty() ? dump_dir : cfg.dump_blocks_dir;
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
    write_block_coordinates(sys.m11, (std::filesystem::path(dir) / "m11.txt").string());
    write_block_coordinates(sys.m12, (std::filesystem::path(dir) / "m12.txt").string());
    write_block_coordinates(sys.m21, (std::filesystem::path(dir) / "m21.txt").string());
    write_block_coordinates(sys.m22, (std::filesystem::path(dir) / "m22.txt").string());
    std::cout << "blocks dumped to " << dir << "\n";
  }
  return kExitOk;
}

int cmd_solve_one(const std::string& config_path, double position, bool has_position,
                  int workers_override) {
  RunConfig cfg = parse_config(config_path);
  cfg.workers = effective_workers(cfg, workers_override);
  ScanSession session(cfg);
  double z = has_position ? position : cfg.geometry.coil_ref_z;
  SignalPoint point = session.solve_position(z);
  if (point.failed) {
    std::cerr << "[solver] position " << z << " failed\n";
    return kExitSolver;
  }
  std::cout << "z " << point.z << "\n";
  std::cout << "Z11 " << point.delta_z(1, 1) << " Z12 " << point.delta_z(1, 2) << " Z21 "
            << point.delta_z(2, 1) << " Z22 " << point.delta_z(2, 2) << "\n";
  std::cout << "Z_FA " << point.z_fa << " Z_F3 " << point.z_f3 << "\n";
  std::cout << "factorizations " << session.factorization_count() << "\n";
  return kExitOk;
}

int cmd_scan(const std::string& config_path, const std::string& output, int workers_override,
             const std::string& timing_path) {
  RunConfig cfg = parse_config(config_path);
  cfg.workers = effective_workers(cfg, workers_override);
  ImpedanceTrace trace = run_scan(cfg);
  std::string out = output.empty() ? cfg.output_path : output;
  write_trace_csv(trace, out);
  std::string timing = timing_path.empty() ? cfg.timing_path : timing_path;
  if (!timing.empty()) write_timing_json(trace, timing);
  std::cout << "scan complete: " << trace.points.size() << " positions, "
            << trace.timing.factorizations << " factorizations, total "
            << trace.timing.t_total << " s -> " << out << "\n";
  return kExitOk;
}

int cmd_report_compare(const std::string& a, const std::string& b) {
  ImpedanceTrace ta = read_trace_csv(trace_path(a));
  ImpedanceTrace tb = read_trace_csv(trace_path(b));
  if (!ta.config_hash.empty() && !tb.config_hash.empty() && ta.config_hash != tb.config_hash) {
    std::cout << "warning: traces come from different configs\n";
  }
  double dev = max_relative_deviation(ta, tb);
  std::cout << "max signal deviation " << dev << "\n";
  return kExitOk;
}

int cmd_report_speedup(const std::vector<std::string>& files) {
  std::vector<TimingRecord> runs;
  runs.reserve(files.size());
  for (const auto& f : files) runs.push_back(read_timing_json(f));
  std::cout << speedup_report(runs);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ect: eddy-current tube inspection solver and scan driver"};
  app.require_subcommand(1);

  std::string config_path, write_path, output, dump_dir, timing_path;
  std::string compare_a, compare_b;
  std::vector<std::string> speedup_files;
  int parts_override = 0, workers_override = 0;
  double position = 0.0;

  auto* validate_cmd = app.add_subcommand("validate-mesh", "Load or generate a mesh and check "
                                                           "every invariant");
  validate_cmd->add_option("--config", config_path, "run configuration")->required();
  validate_cmd->add_option("--write", write_path, "also write the mesh to this file");

  auto* partition_cmd =
      app.add_subcommand("partition", "Partition the mesh; one part id per line plus stats");
  partition_cmd->add_option("--config", config_path, "run configuration")->required();
  partition_cmd->add_option("--parts", parts_override, "override scan.parts");
  partition_cmd->add_option("--output", output, "output file ('-' for stdout)");

  auto* assemble_cmd = app.add_subcommand("assemble", "Assemble the block system and report "
                                                      "sizes and timings");
  assemble_cmd->add_option("--config", config_path, "run configuration")->required();
  assemble_cmd->add_option("--dump-blocks", dump_dir, "write coordinate-format block files");
  assemble_cmd->add_option("--workers", workers_override, "override worker count");

  auto* solve_cmd = app.add_subcommand("solve-one", "Factor once and solve a single probe "
                                                    "position");
  solve_cmd->add_option("--config", config_path, "run configuration")->required();
  auto* pos_opt = solve_cmd->add_option("--position", position, "probe z position (m)");
  solve_cmd->add_option("--workers", workers_override, "override worker count");

  auto* scan_cmd = app.add_subcommand("scan", "Run the full scan and write the impedance trace");
  scan_cmd->add_option("--config", config_path, "run configuration")->required();
  scan_cmd->add_option("--output", output, "trace CSV path (defaults to output.path)");
  scan_cmd->add_option("--workers", workers_override, "override worker count");
  scan_cmd->add_option("--timing", timing_path, "also write timing metadata JSON");

  auto* report_cmd = app.add_subcommand("report", "Compare traces or summarize speedups");
  auto* compare_opt = report_cmd->add_option("--compare", compare_a,
                                             "first trace (CSV or run directory)");
  report_cmd->add_option("--against", compare_b, "second trace (CSV or run directory)");
  auto* speedup_opt =
      report_cmd->add_option("--speedup", speedup_files, "timing JSON files across worker counts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) return cmd_validate_mesh(config_path, write_path);
    if (partition_cmd->parsed()) return cmd_partition(config_path, parts_override, output);
    if (assemble_cmd->parsed()) return cmd_assemble(config_path, dump_dir, workers_override);
    if (solve_cmd->parsed()) {
      return cmd_solve_one(config_path, position, pos_opt->count() > 0, workers_override);
    }
    if (scan_cmd->parsed()) return cmd_scan(config_path, output, workers_override, timing_path);
    if (report_cmd->parsed()) {
      if (compare_opt->count() > 0) {
        if (compare_b.empty()) {
          std::cerr << "[config] report --compare needs --against\n";
          return kExitConfig;
        }
        return cmd_report_compare(compare_a, compare_b);
      }
      if (speedup_opt->count() > 0) return cmd_report_speedup(speedup_files);
      std::cerr << "[config] report needs --compare or --speedup\n";
      return kExitConfig;
    }
  } catch (const ConfigError& e) {
    std::cerr << "[config] " << e.what() << "\n";
    return kExitConfig;
  } catch (const MeshError& e) {
    std::cerr << "[mesh] " << e.what() << "\n";
    return kExitMesh;
  } catch (const SolverError& e) {
    std::cerr << "[solver] " << e.what() << "\n";
    return kExitSolver;
  } catch (const IoError& e) {
    std::cerr << "[io] " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
