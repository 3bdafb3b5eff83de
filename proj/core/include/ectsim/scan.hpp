// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ectsim/assembly.hpp"
#include "ectsim/config.hpp"
#include "ectsim/signals.hpp"
#include "ectsim/solver.hpp"

namespace ectsim {

struct TimingBreakdown {
  double t_mesh = 0.0;
  double t_partition = 0.0;
  double t_assemble = 0.0;
  double t_reduce = 0.0;
  double t_factorize = 0.0;
  double t_solve = 0.0;  // whole position loop
  double t_total = 0.0;
  int factorizations = 0;
  int workers = 1;
  int parts = 1;
};

struct ImpedanceTrace {
  std::vector<SignalPoint> points;  // ascending probe z
  TimingBreakdown timing;
  std::string config_hash;
};

// Factor-once scan state: one mesh covering every probe position, one
// factorization per distinct material configuration, shared by all
// position solves. solve_position is const and thread-safe.
class ScanSession {
 public:
  explicit ScanSession(const RunConfig& config);

  SignalPoint solve_position(double z) const;

  const Mesh& mesh() const { return mesh_; }
  const ConductorIndexMap& cond_map() const { return cmap_; }
  const PartitionMap& partition() const { return pmap_; }
  const MaterialTable& primary_materials() const { return mats_primary_; }
  const Factorization& primary_factorization() const { return *factor_primary_; }
  int factorization_count() const { return factorizations_; }
  const TimingBreakdown& setup_timing() const { return timing_; }
  const std::vector<int>& defect_tets() const { return defect_tets_; }
  int total_dofs() const { return system_primary_.total_dofs(); }

 private:
  std::vector<complexd> position_rhs(double z, int which_coil) const;

  RunConfig config_;
  Mesh mesh_;
  ConductorIndexMap cmap_;
  PartitionMap pmap_;
  MaterialTable mats_primary_;
  MaterialTable mats_reference_;
  bool two_configs_ = false;
  BlockSystem system_primary_;
  std::unique_ptr<Factorization> factor_primary_;
  std::unique_ptr<Factorization> factor_reference_;  // null when configs coincide
  CscMatrix global_primary_, global_reference_;      // kept for the iterative path
  std::vector<int> defect_tets_;
  int factorizations_ = 0;
  TimingBreakdown timing_;
};

// Full pipeline: mesh -> partition -> assemble -> reduce -> BC -> factorize
// (once per configuration) -> per-position rhs/solve/signals -> ordered trace.
ImpedanceTrace run_scan(const RunConfig& config);
ImpedanceTrace run_scan(const ScanSession& session, const RunConfig& config, int workers);

void write_trace_csv(const ImpedanceTrace& trace, const std::string& path);
ImpedanceTrace read_trace_csv(const std::string& path);

// Largest relative per-signal deviation between two traces (0 for equal).
double max_relative_deviation(const ImpedanceTrace& a, const ImpedanceTrace& b);

// Timing metadata for speedup accounting across worker counts.
void write_timing_json(const ImpedanceTrace& trace, const std::string& path);

struct TimingRecord {
  std::string config_hash;
  int workers = 0;
  double t_assemble = 0.0;
  double t_reduce = 0.0;
  double t_factorize = 0.0;
  double t_solve = 0.0;
  double total() const { return t_assemble + t_reduce + t_factorize + t_solve; }
};
TimingRecord read_timing_json(const std::string& path);

// Speedup table vs the 1-worker run: reports t_serial / t_p and echoes the
// reciprocal ratio t_p / t_serial alongside. Requires matching config hashes.
std::string speedup_report(const std::vector<TimingRecord>& runs);

}  // namespace ectsim
