// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "ectsim/scan.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ectsim/worker_pool.hpp"

namespace ectsim {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ScanSession::ScanSession(const RunConfig& config) : config_(config) {
  auto t_start = std::chrono::steady_clock::now();
  timing_.workers = config.workers;
  timing_.parts = config.parts;

  auto t0 = std::chrono::steady_clock::now();
  mesh_ = config.mesh_source == "file" ? load_mesh(config.mesh_file, config.tag_map)
                                       : generate_tube_mesh(config.geometry);
  timing_.t_mesh = seconds_since(t0);

  cmap_ = conductor_map(mesh_);
  defect_tets_ = mesh_.region_tets(RegionTag::kDefect);

  t0 = std::chrono::steady_clock::now();
  pmap_ = partition_tets(mesh_, config.parts, config.seed);
  timing_.t_partition = seconds_since(t0);

  mats_primary_ = config.material_table();
  config.resolve_mu_tilde(mats_primary_, mesh_);
  mats_reference_ = reference_variant(mats_primary_);
  // A second configuration only exists when it can change the signal: the
  // impedance variation integrates over the defect region alone.
  two_configs_ = !defect_tets_.empty() && !mats_reference_.same_coefficients(mats_primary_);

  AssembleTimings at;
  system_primary_ = assemble_system(mesh_, cmap_, mats_primary_, pmap_, config.workers, &at);
  timing_.t_assemble += at.assemble;
  timing_.t_reduce += at.reduce;
  apply_essential_bc(system_primary_, mesh_);
  GlobalSystem global_primary = build_global(system_primary_);

  BlockSystem system_reference;
  GlobalSystem global_reference;
  if (two_configs_) {
    system_reference =
        assemble_system(mesh_, cmap_, mats_reference_, pmap_, config.workers, &at);
    timing_.t_assemble += at.assemble;
    timing_.t_reduce += at.reduce;
    apply_essential_bc(system_reference, mesh_);
    global_reference = build_global(system_reference);
  }

  t0 = std::chrono::steady_clock::now();
  if (config.solver_method == "direct") {
    factor_primary_ = std::make_unique<Factorization>(
        Factorization::compute(global_primary.matrix, global_primary.dof_node));
    ++factorizations_;
    if (two_configs_) {
      factor_reference_ = std::make_unique<Factorization>(
          Factorization::compute(global_reference.matrix, global_reference.dof_node));
      ++factorizations_;
    }
  } else {
    global_primary_ = std::move(global_primary.matrix);
    if (two_configs_) global_reference_ = std::move(global_reference.matrix);
  }
  timing_.t_factorize = seconds_since(t0);
  timing_.t_total = seconds_since(t_start);
}

std::vector<complexd> ScanSession::position_rhs(double z, int which_coil) const {
  std::vector<int> support = coil_support(mesh_, config_.geometry.coil, z, which_coil);
  std::vector<complexd> rhs =
      assemble_rhs(mesh_, support, config_.coil_amplitude, system_primary_.total_dofs());
  apply_pins_to_rhs(system_primary_, rhs);
  return rhs;
}

SignalPoint ScanSession::solve_position(double z) const {
  SignalPoint point;
  point.z = z;
  try {
    const double omega = mats_primary_.omega;
    const int n_nodes = mesh_.node_count();
    const int n_cond = cmap_.count();

    auto run_solve = [&](const std::vector<complexd>& rhs, bool reference) {
      if (factor_primary_) {
        const Factorization& f = reference ? *factor_reference_ : *factor_primary_;
        return split_solution(f.solve(rhs).x, n_nodes, n_cond, omega);
      }
      const CscMatrix& m = reference ? global_reference_ : global_primary_;
      IterativeOptions opt{config_.solver_tol, config_.solver_max_iter, config_.solver_restart};
      IterativeResult res = solve_iterative(m, rhs, opt);
      if (!res.converged) {
        throw SolverError("iterative solve did not converge: residual " +
                          std::to_string(res.residual));
      }
      return split_solution(res.x, n_nodes, n_cond, omega);
    };

    std::vector<complexd> rhs1 = position_rhs(z, 1);
    std::vector<complexd> rhs2 = position_rhs(z, 2);
    PotentialSolution sol1 = run_solve(rhs1, false);
    PotentialSolution sol2 = run_solve(rhs2, false);

    if (two_configs_) {
      PotentialSolution ref1 = run_solve(rhs1, true);
      PotentialSolution ref2 = run_solve(rhs2, true);
      const PotentialSolution* sols[2] = {&sol1, &sol2};
      const PotentialSolution* refs[2] = {&ref1, &ref2};
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          point.delta_z.z[k][l] =
              delta_impedance(mesh_, cmap_, defect_tets_, mats_primary_, mats_reference_,
                              *sols[k], *refs[l]);
        }
      }
    }
    SignalModes modes = signal_modes(point.delta_z);
    point.z_fa = modes.z_fa;
    point.z_f3 = modes.z_f3;
  } catch (const SolverError&) {
    point.failed = true;
  }
  return point;
}

ImpedanceTrace run_scan(const ScanSession& session, const RunConfig& config, int workers) {
  ImpedanceTrace trace;
  trace.config_hash = config_hash(config);
  trace.timing = session.setup_timing();
  trace.timing.workers = workers;
  trace.timing.factorizations = session.factorization_count();

  std::vector<double> positions = config.positions();
  trace.points.resize(positions.size());
  auto t0 = std::chrono::steady_clock::now();
  parallel_for(static_cast<int>(positions.size()), workers,
               [&](int i) { trace.points[i] = session.solve_position(positions[i]); });
  trace.timing.t_solve = seconds_since(t0);
  trace.timing.t_total = session.setup_timing().t_total + trace.timing.t_solve;

  std::stable_sort(trace.points.begin(), trace.points.end(),
                   [](const SignalPoint& a, const SignalPoint& b) { return a.z < b.z; });
  return trace;
}

ImpedanceTrace run_scan(const RunConfig& config) {
  ScanSession session(config);
  return run_scan(session, config, config.workers);
}

void write_trace_csv(const ImpedanceTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open trace for writing: " + path);
  out << "# ectsim impedance trace\n";
  out << "# config " << trace.config_hash << "\n";
  out << "# workers " << trace.timing.workers << " parts " << trace.timing.parts
      << " factorizations " << trace.timing.factorizations << "\n";
  char tbuf[256];
  std::snprintf(tbuf, sizeof(tbuf),
                "# timing mesh=%.3f partition=%.3f assemble=%.3f reduce=%.3f factorize=%.3f "
                "solve=%.3f total=%.3f\n",
                trace.timing.t_mesh, trace.timing.t_partition, trace.timing.t_assemble,
                trace.timing.t_reduce, trace.timing.t_factorize, trace.timing.t_solve,
                trace.timing.t_total);
  out << tbuf;
  out << "z_m,re_Z11,im_Z11,re_Z12,im_Z12,re_Z21,im_Z21,re_Z22,im_Z22,"
         "re_ZFA,im_ZFA,re_ZF3,im_ZF3\n";

  std::vector<SignalPoint> rows = trace.points;
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SignalPoint& a, const SignalPoint& b) { return a.z < b.z; });
  char buf[640];
  for (const auto& p : rows) {
    if (p.failed) {
      out << "# failed position z=" << p.z << "\n";
      continue;
    }
    std::snprintf(buf, sizeof(buf),
                  "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,"
                  "%.12g\n",
                  p.z, p.delta_z(1, 1).real(), p.delta_z(1, 1).imag(), p.delta_z(1, 2).real(),
                  p.delta_z(1, 2).imag(), p.delta_z(2, 1).real(), p.delta_z(2, 1).imag(),
                  p.delta_z(2, 2).real(), p.delta_z(2, 2).imag(), p.z_fa.real(), p.z_fa.imag(),
                  p.z_f3.real(), p.z_f3.imag());
    out << buf;
  }
  if (!out) throw IoError("failed writing trace: " + path);
}

ImpedanceTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace: " + path);
  ImpedanceTrace trace;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ms(line.substr(1));
      std::string word;
      ms >> word;
      if (word == "config") ms >> trace.config_hash;
      if (word == "workers") {
        ms >> trace.timing.workers >> word >> trace.timing.parts >> word >>
            trace.timing.factorizations;
      }
      continue;
    }
    if (!header_seen) {
      if (line.rfind("z_m", 0) != 0) throw IoError(path + ": missing trace header row");
      header_seen = true;
      continue;
    }
    std::vector<double> v;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != 13) throw IoError(path + ": malformed trace row");
    SignalPoint p;
    p.z = v[0];
    p.delta_z.z[0][0] = complexd(v[1], v[2]);
    p.delta_z.z[0][1] = complexd(v[3], v[4]);
    p.delta_z.z[1][0] = complexd(v[5], v[6]);
    p.delta_z.z[1][1] = complexd(v[7], v[8]);
    p.z_fa = complexd(v[9], v[10]);
    p.z_f3 = complexd(v[11], v[12]);
    trace.points.push_back(p);
  }
  if (!header_seen) throw IoError(path + ": not a trace file");
  return trace;
}

double max_relative_deviation(const ImpedanceTrace& a, const ImpedanceTrace& b) {
  if (a.points.size() != b.points.size()) {
    throw ConfigError("traces have different lengths and cannot be compared");
  }
  double worst = 0.0;
  auto compare = [&worst](complexd x, complexd y) {
    double scale = std::max(std::abs(x), std::abs(y));
    if (scale == 0.0) return;
    worst = std::max(worst, std::abs(x - y) / scale);
  };
  for (size_t i = 0; i < a.points.size(); ++i) {
    const auto& pa = a.points[i];
    const auto& pb = b.points[i];
    for (int k = 1; k <= 2; ++k) {
      for (int l = 1; l <= 2; ++l) compare(pa.delta_z(k, l), pb.delta_z(k, l));
    }
    compare(pa.z_fa, pb.z_fa);
    compare(pa.z_f3, pb.z_f3);
  }
  return worst;
}

void write_timing_json(const ImpedanceTrace& trace, const std::string& path) {
  nlohmann::json j;
  j["config_hash"] = trace.config_hash;
  j["workers"] = trace.timing.workers;
  j["t_assemble"] = trace.timing.t_assemble;
  j["t_reduce"] = trace.timing.t_reduce;
  j["t_factorize"] = trace.timing.t_factorize;
  j["t_solve"] = trace.timing.t_solve;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open timing file for writing: " + path);
  out << j.dump(2) << "\n";
}

TimingRecord read_timing_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open timing file: " + path);
  nlohmann::json j;
  in >> j;
  TimingRecord rec;
  rec.config_hash = j.at("config_hash").get<std::string>();
  rec.workers = j.at("workers").get<int>();
  rec.t_assemble = j.at("t_assemble").get<double>();
  rec.t_reduce = j.at("t_reduce").get<double>();
  rec.t_factorize = j.at("t_factorize").get<double>();
  rec.t_solve = j.at("t_solve").get<double>();
  return rec;
}

std::string speedup_report(const std::vector<TimingRecord>& runs) {
  if (runs.empty()) throw ConfigError("speedup report needs at least one timing record");
  for (const auto& r : runs) {
    if (r.config_hash != runs.front().config_hash) {
      throw ConfigError("speedup report requires identical configs (hash mismatch)");
    }
  }
  const TimingRecord* serial = nullptr;
  for (const auto& r : runs) {
    if (r.workers == 1) serial = &r;
  }
  if (!serial) throw ConfigError("speedup report needs a 1-worker run as baseline");

  std::vector<TimingRecord> sorted = runs;
  std::sort(sorted.begin(), sorted.end(),
            [](const TimingRecord& a, const TimingRecord& b) { return a.workers < b.workers; });

  std::ostringstream os;
  os << "workers  t_assemble  t_reduce  t_factorize  t_solve  t_total  speedup  paper_ratio\n";
  char buf[256];
  for (const auto& r : sorted) {
    double speedup = r.total() > 0.0 ? serial->total() / r.total() : 0.0;
    double paper_ratio = serial->total() > 0.0 ? r.total() / serial->total() : 0.0;
    std::snprintf(buf, sizeof(buf), "%7d  %10.3f  %8.3f  %11.3f  %7.3f  %7.3f  %7.3f  %11.3f\n",
                  r.workers, r.t_assemble, r.t_reduce, r.t_factorize, r.t_solve, r.total(),
                  speedup, paper_ratio);
    os << buf;
  }
  return os.str();
}

}  // namespace ectsim
