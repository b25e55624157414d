// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hyperred/fom.hpp"
#include "hyperred/pareto.hpp"
#include "hyperred/rom.hpp"
#include "hyperred/types.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hyperred {

/// One experiment: problem + discretization + reduction settings.
/// Loaded from JSON; command-line flags override individual fields.
struct PipelineConfig {
  std::string problem = "diffusion";  // diffusion | bar
  Index nx = 16;
  Index ny = 16;
  Index n_elem = 64;
  double mu = 0.3;                   // online (test) parameter
  std::vector<double> training_mus;  // empty -> {mu} (reproductive)
  double dt = 0.0;                   // 0 -> problem default
  double t_final = 0.0;              // 0 -> problem default
  std::string solver;                // "" -> problem default

  std::string method = "none";  // none | deim | qdeim_e | sopt | eqp
  double er_target = 4.0;
  Index n_samples = 0;     // n_f; 0 -> min(N, 2 r_f)
  Index r_f_override = 0;  // 0 -> truncate force spectrum at er_target
  double eqp_tol = 1e-4;
  Index max_nnls = 0;      // 0 -> uncapped
  Index eqp_stride = 1;    // constraint-snapshot thinning
  Index n_windows = 1;
  bool augment_constant = true;  // diffusion only
  std::string norm = "euclidean";  // euclidean | mass
  Index timing_repeats = 3;

  std::filesystem::path workdir = "hyperred_out";

  double default_dt() const;
  Index default_steps() const;
  std::string default_solver() const;
  std::string mode() const;  // reproductive | predictive
  std::string hash() const;
};

PipelineConfig load_config(const std::filesystem::path& json_path);

std::unique_ptr<FomProblem> build_problem(const PipelineConfig& cfg, double mu);

/// Offset convention for each state field of a problem.
std::vector<std::pair<std::string, OffsetMode>> field_offset_modes(
    const std::string& problem);

struct OfflineRun {
  double mu = 0.0;
  bool training = false;
  std::filesystem::path manifest;
};

/// Runs the FOM for every training parameter (plus the test parameter
/// when it is not a training one) and writes state/force snapshot CSVs,
/// the final state, and a manifest per run.
std::vector<OfflineRun> cmd_offline(const PipelineConfig& cfg);

struct MergeResult {
  std::vector<std::pair<std::string, Index>> field_ranks;  // at er_target
  Index force_rank = 0;
  std::filesystem::path basis_dir;
};

/// Concatenates the training snapshots, runs one POD per state field
/// and one for the force, and writes the basis files plus an energy
/// report for the requested residual-energy targets.
MergeResult cmd_merge(const PipelineConfig& cfg,
                      const std::vector<double>& er_targets);

/// Builds the hyper-reduction strategy named by cfg.method, integrates
/// the ROM, compares against the in-process FOM reference, and writes
/// the RunRecord JSON. Returns the record.
RunRecord cmd_online(const PipelineConfig& cfg);

struct ReportResult {
  std::filesystem::path records_csv;
  std::vector<std::filesystem::path> front_files;
};

/// Tidy CSV of all records plus per-method and overall Pareto front
/// polylines for external plotting.
ReportResult cmd_report(const std::vector<RunRecord>& records,
                        const std::filesystem::path& outdir);

}  // namespace hyperred
