// SPDX-License-Identifier: Apache-2.0
//
// Batch pipeline driver: offline snapshot collection, basis merging,
// hyper-reduced online runs, and Pareto reporting.
//
//   hyperred offline <config.json> [flags]
//   hyperred merge   <config.json> [flags]
//   hyperred online  <config.json> --method eqp --er 4 [flags]
//   hyperred report  <config.json>
//   hyperred pareto  <config.json>
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure.

#include <CLI11.hpp>

#include "hyperred/io.hpp"
#include "hyperred/pareto.hpp"
#include "hyperred/pipeline.hpp"

#include <filesystem>
#include <iostream>
#include <vector>

namespace {

using hyperred::PipelineConfig;

struct Overrides {
  std::string method;
  double er = -1.0;
  long long nsr = -1;
  long long rf = -1;
  double eqp_tol = -1.0;
  long long maxnnls = -1;
  long long eqp_stride = -1;
  long long nwin = -1;
  double mu = std::numeric_limits<double>::quiet_NaN();
  std::string workdir;
  std::string norm;
  long long repeats = -1;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--method", ov.method, "none|deim|qdeim_e|sopt|eqp");
  cmd->add_option("--er", ov.er, "residual energy fraction target");
  cmd->add_option("--nsr", ov.nsr, "number of sampled indices n_f");
  cmd->add_option("--rf", ov.rf, "force basis rank override");
  cmd->add_option("--eqp-tol", ov.eqp_tol, "NNLS relative tolerance");
  cmd->add_option("--maxnnls", ov.maxnnls, "cap on EQP support size");
  cmd->add_option("--eqp-stride", ov.eqp_stride,
                  "constraint snapshot thinning stride");
  cmd->add_option("--nwin", ov.nwin, "number of time windows");
  cmd->add_option("--mu", ov.mu, "online parameter value");
  cmd->add_option("--workdir", ov.workdir, "artifact directory");
  cmd->add_option("--norm", ov.norm, "euclidean|mass");
  cmd->add_option("--repeats", ov.repeats, "online timing repeats");
}

void apply(const Overrides& ov, PipelineConfig& cfg) {
  if (!ov.method.empty()) cfg.method = ov.method;
  if (ov.er >= 0.0) cfg.er_target = ov.er;
  if (ov.nsr >= 0) cfg.n_samples = ov.nsr;
  if (ov.rf >= 0) cfg.r_f_override = ov.rf;
  if (ov.eqp_tol >= 0.0) cfg.eqp_tol = ov.eqp_tol;
  if (ov.maxnnls >= 0) cfg.max_nnls = ov.maxnnls;
  if (ov.eqp_stride >= 1) cfg.eqp_stride = ov.eqp_stride;
  if (ov.nwin >= 1) cfg.n_windows = ov.nwin;
  if (!std::isnan(ov.mu)) cfg.mu = ov.mu;
  if (!ov.workdir.empty()) cfg.workdir = ov.workdir;
  if (!ov.norm.empty()) cfg.norm = ov.norm;
  if (ov.repeats >= 1) cfg.timing_repeats = ov.repeats;
}

std::vector<hyperred::RunRecord> load_all_records(const PipelineConfig& cfg) {
  std::vector<std::filesystem::path> paths;
  const auto dir = cfg.workdir / "records";
  if (std::filesystem::is_directory(dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() == ".json" &&
          entry.path().filename().string().rfind("record_", 0) == 0) {
        paths.push_back(entry.path());
      }
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) {
    throw std::invalid_argument("no run records under " + dir.string());
  }
  return hyperred::load_run_records(paths);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projection-based ROM pipeline with hyper-reduction"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  std::vector<double> er_list = {1, 2, 3, 4, 5, 6};

  auto* offline = app.add_subcommand("offline", "run FOMs, collect snapshots");
  auto* merge = app.add_subcommand("merge", "POD over training snapshots");
  auto* online = app.add_subcommand("online", "hyper-reduced ROM run");
  auto* report = app.add_subcommand("report", "records CSV + Pareto fronts");
  auto* pareto = app.add_subcommand("pareto", "print the Pareto front");

  for (auto* cmd : {offline, merge, online, report, pareto}) {
    cmd->add_option("config", config_path, "experiment JSON")->required();
    add_override_flags(cmd, ov);
  }
  merge->add_option("--er-list", er_list, "energy targets for the report");

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig cfg = hyperred::load_config(config_path);
    apply(ov, cfg);

    if (offline->parsed()) {
      hyperred::cmd_offline(cfg);
    } else if (merge->parsed()) {
      hyperred::cmd_merge(cfg, er_list);
    } else if (online->parsed()) {
      hyperred::cmd_online(cfg);
    } else if (report->parsed()) {
      hyperred::cmd_report(load_all_records(cfg), cfg.workdir / "report");
    } else if (pareto->parsed()) {
      const auto records = load_all_records(cfg);
      const hyperred::ParetoSet ps = hyperred::pareto_extract(records);
      std::cout << "front: " << ps.front.size() << " of " << records.size()
                << " records\n";
      for (hyperred::Index i : ps.front) {
        const auto& r = ps.records[i];
        std::cout << "  " << r.method << " er=" << r.er_target
                  << " n_points=" << r.n_points << " error=" << r.combined_error
                  << " rel_time=" << r.relative_online_time << "\n";
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
