// SPDX-License-Identifier: Apache-2.0

#include "hyperred/pipeline.hpp"

#include "hyperred/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

namespace hyperred {

namespace {

using nlohmann::json;

std::string format_mu(double mu) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", mu);
  return buf;
}

std::filesystem::path run_dir(const PipelineConfig& cfg, double mu) {
  return cfg.workdir / "runs" / ("run_mu" + format_mu(mu));
}

std::filesystem::path basis_dir(const PipelineConfig& cfg) {
  return cfg.workdir / "basis";
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  json j;
  in >> j;
  return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

Integrator integrator_from(const std::string& solver) {
  if (solver == "backward_euler") return Integrator::backward_euler;
  if (solver == "rk4") return Integrator::rk4;
  throw std::invalid_argument("unknown solver: " + solver);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double PipelineConfig::default_dt() const {
  if (dt > 0.0) return dt;
  return problem == "bar" ? 0.01 : 0.001;
}

Index PipelineConfig::default_steps() const {
  const double t_end = t_final > 0.0 ? t_final : (problem == "bar" ? 5.0 : 0.1);
  return static_cast<Index>(std::llround(t_end / default_dt()));
}

std::string PipelineConfig::default_solver() const {
  if (!solver.empty()) return solver;
  return problem == "bar" ? "rk4" : "backward_euler";
}

std::string PipelineConfig::mode() const {
  if (training_mus.empty()) return "reproductive";
  const bool held_out =
      std::find(training_mus.begin(), training_mus.end(), mu) ==
      training_mus.end();
  return held_out ? "predictive" : "reproductive";
}

std::string PipelineConfig::hash() const {
  std::ostringstream ss;
  ss << problem << '|' << nx << '|' << ny << '|' << n_elem << '|' << mu << '|';
  for (double m : training_mus) ss << m << ',';
  ss << '|' << default_dt() << '|' << default_steps() << '|'
     << default_solver() << '|' << method << '|' << er_target << '|'
     << n_samples << '|' << r_f_override << '|' << eqp_tol << '|' << max_nnls
     << '|' << eqp_stride << '|' << n_windows << '|' << augment_constant << '|'
     << norm;
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016zx",
                std::hash<std::string>{}(ss.str()));
  return buf;
}

PipelineConfig load_config(const std::filesystem::path& json_path) {
  json j;
  try {
    j = read_json_file(json_path);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  PipelineConfig cfg;
  cfg.problem = j.value("problem", cfg.problem);
  cfg.nx = j.value("nx", cfg.nx);
  cfg.ny = j.value("ny", cfg.ny);
  cfg.n_elem = j.value("n_elem", cfg.n_elem);
  cfg.mu = j.value("mu", cfg.mu);
  cfg.training_mus = j.value("training_mus", cfg.training_mus);
  cfg.dt = j.value("dt", cfg.dt);
  cfg.t_final = j.value("t_final", cfg.t_final);
  cfg.solver = j.value("solver", cfg.solver);
  cfg.method = j.value("method", cfg.method);
  cfg.er_target = j.value("er", cfg.er_target);
  cfg.n_samples = j.value("nsr", cfg.n_samples);
  cfg.r_f_override = j.value("rf", cfg.r_f_override);
  cfg.eqp_tol = j.value("eqp_tol", cfg.eqp_tol);
  cfg.max_nnls = j.value("maxnnls", cfg.max_nnls);
  cfg.eqp_stride = j.value("eqp_stride", cfg.eqp_stride);
  cfg.n_windows = j.value("nwin", cfg.n_windows);
  cfg.augment_constant = j.value("augment_constant", cfg.augment_constant);
  cfg.norm = j.value("norm", cfg.norm);
  cfg.timing_repeats = j.value("timing_repeats", cfg.timing_repeats);
  cfg.workdir = std::filesystem::path(
      j.value("workdir", cfg.workdir.string()));
  if (cfg.problem != "diffusion" && cfg.problem != "bar") {
    throw std::invalid_argument("config: unknown problem " + cfg.problem);
  }
  return cfg;
}

std::unique_ptr<FomProblem> build_problem(const PipelineConfig& cfg,
                                          double mu) {
  if (cfg.problem == "bar") return make_hyperelastic_bar(cfg.n_elem, mu);
  return make_nonlinear_diffusion(cfg.nx, cfg.ny, mu);
}

std::vector<std::pair<std::string, OffsetMode>> field_offset_modes(
    const std::string& problem) {
  if (problem == "bar") {
    return {{"velocity", OffsetMode::zero},
            {"position", OffsetMode::first_snapshot}};
  }
  return {{"pressure", OffsetMode::zero}};
}

namespace {

FomTrajectory run_fom(const FomProblem& fom, const PipelineConfig& cfg) {
  const Integrator which = integrator_from(cfg.default_solver());
  return which == Integrator::backward_euler
             ? solve_fom_backward_euler(fom, cfg.default_dt(),
                                        cfg.default_steps())
             : solve_fom_rk4(fom, cfg.default_dt(), cfg.default_steps());
}

}  // namespace

std::vector<OfflineRun> cmd_offline(const PipelineConfig& cfg) {
  require(cfg.default_steps() >= 1, "offline: zero-length run request");

  std::vector<double> mus =
      cfg.training_mus.empty() ? std::vector<double>{cfg.mu} : cfg.training_mus;
  const bool test_is_training =
      std::find(mus.begin(), mus.end(), cfg.mu) != mus.end();
  std::vector<std::pair<double, bool>> jobs;
  for (double m : mus) jobs.emplace_back(m, true);
  if (!test_is_training) jobs.emplace_back(cfg.mu, false);

  std::vector<OfflineRun> out;
  json index;
  index["problem"] = cfg.problem;
  index["runs"] = json::array();

  for (const auto& [mu, training] : jobs) {
    const auto fom = build_problem(cfg, mu);
    const FomTrajectory traj = run_fom(*fom, cfg);

    std::vector<Vector> forces;
    forces.reserve(traj.states.size());
    for (size_t i = 0; i < traj.states.size(); ++i) {
      forces.push_back(fom->eval_force_full(traj.states[i], traj.times[i]));
    }

    const SnapshotMatrix states =
        assemble_snapshots(traj.states, OffsetMode::zero, traj.times,
                           "mu=" + format_mu(mu));
    const SnapshotMatrix force_snaps =
        assemble_snapshots(forces, OffsetMode::zero, traj.times,
                           "mu=" + format_mu(mu));

    const auto dir = run_dir(cfg, mu);
    save_snapshots(dir / "states.csv", dir / "states_offset.csv", states);
    save_matrix_csv(dir / "forces.csv", force_snaps.data);
    save_vector_csv(dir / "final_state.csv", traj.states.back());

    json manifest;
    manifest["problem"] = cfg.problem;
    manifest["mu"] = mu;
    manifest["dt"] = cfg.default_dt();
    manifest["n_steps"] = cfg.default_steps();
    manifest["solver"] = cfg.default_solver();
    manifest["training"] = training;
    manifest["loop_seconds"] = traj.loop_seconds;
    manifest["times"] = traj.times;
    manifest["state_dim"] = fom->state_dim();
    write_json_file(dir / "manifest.json", manifest);

    index["runs"].push_back((dir / "manifest.json").string());
    out.push_back({mu, training, dir / "manifest.json"});
    std::cout << "offline: mu=" << format_mu(mu) << " ("
              << (training ? "training" : "reference") << "), "
              << states.n_snapshots() << " snapshots\n";
  }

  write_json_file(cfg.workdir / "index.json", index);
  return out;
}

namespace {

struct TrainingData {
  std::vector<SnapshotMatrix> state_runs;  // raw states, zero offset
  std::vector<SnapshotMatrix> force_runs;
};

TrainingData load_training_runs(const PipelineConfig& cfg) {
  const json index = read_json_file(cfg.workdir / "index.json");
  TrainingData data;
  for (const auto& entry : index.at("runs")) {
    const std::filesystem::path manifest_path(entry.get<std::string>());
    const json manifest = read_json_file(manifest_path);
    if (!manifest.at("training").get<bool>()) continue;
    const auto dir = manifest_path.parent_path();
    const auto times = manifest.at("times").get<std::vector<double>>();
    const std::string tag = "mu=" + format_mu(manifest.at("mu").get<double>());
    data.state_runs.push_back(
        load_snapshots(dir / "states.csv", dir / "states_offset.csv", times, tag));
    SnapshotMatrix f;
    f.data = load_matrix_csv(dir / "forces.csv");
    f.offset = Vector::Zero(f.data.rows());
    f.time_stamps = times;
    f.parameter_tags.assign(f.data.cols(), tag);
    data.force_runs.push_back(std::move(f));
  }
  require(!data.state_runs.empty(), "merge: no training manifests found");
  const Index dim = data.state_runs.front().state_dim();
  for (const auto& s : data.state_runs) {
    require(s.state_dim() == dim, "merge: state dimension mismatch across runs");
  }
  return data;
}

}  // namespace

MergeResult cmd_merge(const PipelineConfig& cfg,
                      const std::vector<double>& er_targets) {
  const TrainingData data = load_training_runs(cfg);
  const auto fom = build_problem(cfg, cfg.mu);
  const auto fields = field_offset_modes(cfg.problem);
  const auto layout = fom->field_layout();
  require(fields.size() == layout.size(), "merge: field layout mismatch");

  MergeResult result;
  result.basis_dir = basis_dir(cfg);
  json energy;

  // Per-field POD over the column-concatenated training snapshots.
  for (size_t fi = 0; fi < fields.size(); ++fi) {
    const auto& [name, mode] = fields[fi];
    const FieldSpan& span = layout[fi];

    std::vector<Vector> states;
    std::vector<double> times;
    for (const auto& run : data.state_runs) {
      for (Index j = 0; j < run.n_snapshots(); ++j) {
        states.push_back(run.data.col(j).segment(span.offset, span.length));
        times.push_back(run.time_stamps[static_cast<size_t>(j)]);
      }
    }
    const SnapshotMatrix merged = assemble_snapshots(states, mode, times);
    auto [u, sigma] = compute_basis(merged);

    save_matrix_csv(result.basis_dir / ("state_" + name + "_u.csv"), u);
    save_vector_csv(result.basis_dir / ("state_" + name + "_sigma.csv"), sigma);
    save_vector_csv(result.basis_dir / ("state_" + name + "_offset.csv"),
                    merged.offset);

    for (double target : er_targets) {
      const Index r = truncate_for_energy(sigma, target);
      const EnergyReport rep = energy_residual(sigma, r);
      energy["state"][name]["er" + format_mu(target)] = {
          {"r", r}, {"e_r", rep.e_r}, {"e_tot", rep.e_tot}, {"e_c", rep.e_c}};
      if (target == cfg.er_target) {
        result.field_ranks.emplace_back(name, r);
      }
    }
  }

  // One force basis over the whole nonlinear term.
  {
    std::vector<Vector> forces;
    std::vector<double> times;
    for (const auto& run : data.force_runs) {
      for (Index j = 0; j < run.n_snapshots(); ++j) {
        forces.push_back(run.data.col(j));
        times.push_back(run.time_stamps[static_cast<size_t>(j)]);
      }
    }
    const SnapshotMatrix merged =
        assemble_snapshots(forces, OffsetMode::zero, times);
    auto [u, sigma] = compute_basis(merged);
    save_matrix_csv(result.basis_dir / "force_u.csv", u);
    save_vector_csv(result.basis_dir / "force_sigma.csv", sigma);
    for (double target : er_targets) {
      const Index r = truncate_for_energy(sigma, target);
      energy["force"]["er" + format_mu(target)] = {{"r", r}};
      if (target == cfg.er_target) result.force_rank = r;
    }
  }

  write_json_file(result.basis_dir / "energy.json", energy);
  std::cout << "merge: bases written to " << result.basis_dir.string() << "\n";
  return result;
}

namespace {

struct LoadedBasis {
  std::vector<ReducedBasis> per_field;
  ReducedBasis stacked;
};

LoadedBasis load_state_basis(const PipelineConfig& cfg, double er_target) {
  const auto dir = basis_dir(cfg);
  const auto fields = field_offset_modes(cfg.problem);
  LoadedBasis out;
  for (const auto& [name, mode] : fields) {
    (void)mode;
    ReducedBasis b;
    const Matrix u = load_matrix_csv(dir / ("state_" + name + "_u.csv"));
    b.singular_values = load_vector_csv(dir / ("state_" + name + "_sigma.csv"));
    b.offset = load_vector_csv(dir / ("state_" + name + "_offset.csv"));
    b.retained = truncate_for_energy(b.singular_values, er_target);
    b.basis = u.leftCols(b.retained);
    out.per_field.push_back(std::move(b));
  }
  if (cfg.problem == "diffusion" && cfg.augment_constant) {
    out.per_field[0] = augment_with_constant(out.per_field[0]);
  }
  out.stacked = out.per_field.size() == 1 ? out.per_field[0]
                                          : stack_field_bases(out.per_field);
  return out;
}

ForceBasis load_force_basis(const PipelineConfig& cfg, Index r_f) {
  const auto dir = basis_dir(cfg);
  ForceBasis xi;
  const Matrix u = load_matrix_csv(dir / "force_u.csv");
  xi.singular_values = load_vector_csv(dir / "force_sigma.csv");
  require(r_f >= 1 && r_f <= u.cols(), "online: force rank out of range");
  xi.basis = u.leftCols(r_f);
  return xi;
}

Index resolve_force_rank(const PipelineConfig& cfg) {
  if (cfg.r_f_override > 0) return cfg.r_f_override;
  const Vector sigma =
      load_vector_csv(basis_dir(cfg) / "force_sigma.csv");
  return truncate_for_energy(sigma, cfg.er_target);
}

struct StrategyInfo {
  HrStrategy strategy;
  Index n_points = 0;
  Index sample_mesh_elements = 0;
};

// Snapshot columns restricted to [t_begin, t_end] (predictive-safe:
// training runs only).
SnapshotMatrix window_snapshots(const SnapshotMatrix& all, double t_begin,
                                double t_end) {
  std::vector<Index> cols;
  for (Index j = 0; j < all.n_snapshots(); ++j) {
    const double t = all.time_stamps[static_cast<size_t>(j)];
    if (t >= t_begin - 1e-12 && t <= t_end + 1e-12) cols.push_back(j);
  }
  require(!cols.empty(), "online: no snapshots fall inside a time window");
  SnapshotMatrix out;
  out.data.resize(all.state_dim(), static_cast<Index>(cols.size()));
  for (Index j = 0; j < out.data.cols(); ++j) {
    out.data.col(j) = all.data.col(cols[j]);
    out.time_stamps.push_back(all.time_stamps[static_cast<size_t>(cols[j])]);
    out.parameter_tags.push_back(
        all.parameter_tags[static_cast<size_t>(cols[j])]);
  }
  out.offset = all.offset;
  return out;
}

// preloaded_xi, when given, supplies the force basis (the merge
// artifact); otherwise it is recomputed from the window's snapshots.
StrategyInfo build_strategy(const PipelineConfig& cfg, const FomProblem& fom,
                            const ReducedBasis& psi,
                            const SnapshotMatrix& train_states,
                            const SnapshotMatrix& train_forces,
                            const ForceBasis* preloaded_xi = nullptr) {
  StrategyInfo info;
  if (cfg.method == "none") {
    info.strategy = HrStrategy::none();
    info.sample_mesh_elements =
        static_cast<Index>(std::set<Index>(fom.quadrature().point_to_element.begin(),
                                           fom.quadrature().point_to_element.end())
                               .size());
    return info;
  }

  if (cfg.method == "eqp") {
    std::vector<Index> selected;
    for (Index j = 0; j < train_states.n_snapshots(); j += cfg.eqp_stride) {
      selected.push_back(j);
    }
    const ConstraintMatrix g =
        assemble_constraints(fom, psi, train_states, selected);
    const ConditionedConstraints cc = condition_constraints(g);
    SparseQuadratureRule rule = solve_weights(
        cc.gc, cc.rhs_c, fom.quadrature().weights, cfg.eqp_tol, cfg.max_nnls);
    if (!rule.converged && !rule.capped) {
      std::cerr << "online: NNLS did not converge (residual "
                << rule.achieved_residual << ")\n";
    }
    info.n_points = rule.k_star;
    info.sample_mesh_elements = static_cast<Index>(
        sample_mesh_from_rule(rule, fom.quadrature()).size());
    info.strategy = HrStrategy::eqp(std::move(rule));
    return info;
  }

  // Interpolation samplers need the force basis at this window.
  const SamplerKind kind = sampler_from_string(cfg.method);
  ForceBasis xi;
  if (preloaded_xi != nullptr) {
    xi = *preloaded_xi;
  } else {
    auto [u, sigma] = compute_basis(train_forces);
    Index r_f = cfg.r_f_override > 0
                    ? cfg.r_f_override
                    : truncate_for_energy(sigma, cfg.er_target);
    r_f = std::min(r_f, u.cols());
    xi = ForceBasis{u.leftCols(r_f), sigma};
  }

  const Index r_f = xi.cols();
  const Index n_f = cfg.n_samples > 0
                        ? cfg.n_samples
                        : std::min<Index>(fom.state_dim(), 2 * r_f);
  require(n_f >= r_f, "online: requested n_f is below the force rank r_f");
  require(n_f <= fom.state_dim(), "online: n_f exceeds the state dimension");

  const SampleIndexSet z = run_sampler(kind, xi, n_f);
  info.n_points = n_f;
  info.sample_mesh_elements =
      static_cast<Index>(fom.sample_mesh_from_indices(z).size());
  info.strategy = HrStrategy::interpolation(build_projector(xi, z, &psi));
  return info;
}

void save_strategy_artifacts(const PipelineConfig& cfg,
                             const StrategyInfo& info,
                             const std::string& suffix) {
  const auto dir = cfg.workdir / "hr";
  const std::string stem =
      cfg.method + "_er" + format_mu(cfg.er_target) + suffix;
  if (info.strategy.kind == HrStrategy::Kind::interpolation) {
    save_sample_set(dir / ("samples_" + stem + ".json"),
                    info.strategy.projector.samples, cfg.method);
  } else if (info.strategy.kind == HrStrategy::Kind::eqp) {
    save_sparse_rule(dir / ("rule_" + stem + ".json"), info.strategy.rule);
  }
}

SnapshotMatrix concat_runs(const std::vector<SnapshotMatrix>& runs) {
  std::vector<Vector> cols;
  std::vector<double> times;
  for (const auto& run : runs) {
    for (Index j = 0; j < run.n_snapshots(); ++j) {
      cols.push_back(run.data.col(j) + run.offset);
      times.push_back(run.time_stamps[static_cast<size_t>(j)]);
    }
  }
  return assemble_snapshots(cols, OffsetMode::zero, times);
}

// Per-field POD of the window snapshots, stacked, with the diffusion
// constant augmentation applied when configured.
ReducedBasis window_basis(const PipelineConfig& cfg, const FomProblem& fom,
                          const SnapshotMatrix& states) {
  const auto fields = field_offset_modes(cfg.problem);
  const auto& layout = fom.field_layout();
  std::vector<ReducedBasis> per_field;
  for (size_t fi = 0; fi < fields.size(); ++fi) {
    const FieldSpan& span = layout[fi];
    std::vector<Vector> cols;
    for (Index j = 0; j < states.n_snapshots(); ++j) {
      cols.push_back(states.data.col(j).segment(span.offset, span.length));
    }
    const SnapshotMatrix sub =
        assemble_snapshots(cols, fields[fi].second, states.time_stamps);
    per_field.push_back(
        make_reduced_basis_for_energy(sub, cfg.er_target));
  }
  if (cfg.problem == "diffusion" && cfg.augment_constant) {
    per_field[0] = augment_with_constant(per_field[0]);
  }
  return per_field.size() == 1 ? per_field[0] : stack_field_bases(per_field);
}

}  // namespace

RunRecord cmd_online(const PipelineConfig& cfg) {
  const auto fom = build_problem(cfg, cfg.mu);
  const double dt = cfg.default_dt();
  const Index n_steps = cfg.default_steps();
  const Integrator which = integrator_from(cfg.default_solver());
  const double t_end = n_steps * dt;

  const TrainingData data = load_training_runs(cfg);
  const SnapshotMatrix train_states = concat_runs(data.state_runs);
  const SnapshotMatrix train_forces = concat_runs(data.force_runs);

  // FOM reference: provides both the comparison state and the timing
  // denominator, measured in this process.
  const FomTrajectory fom_traj = run_fom(*fom, cfg);

  TrajectoryRecord rom_traj;
  std::vector<double> online_seconds;
  Index n_points = 0;
  Index mesh_elements = 0;
  Index r_y = 0;

  if (cfg.n_windows <= 1) {
    const LoadedBasis basis = load_state_basis(cfg, cfg.er_target);
    ReducedModel model = project_operators(*fom, basis.stacked);
    ForceBasis merged_xi;
    const ForceBasis* xi_ptr = nullptr;
    if (cfg.method != "none" && cfg.method != "eqp") {
      merged_xi = load_force_basis(cfg, resolve_force_rank(cfg));
      xi_ptr = &merged_xi;
    }
    StrategyInfo info = build_strategy(cfg, *fom, basis.stacked, train_states,
                                       train_forces, xi_ptr);
    save_strategy_artifacts(cfg, info, "");
    model.strategy = std::move(info.strategy);
    n_points = info.n_points;
    mesh_elements = info.sample_mesh_elements;
    r_y = model.dim();

    for (Index rep = 0; rep < std::max<Index>(1, cfg.timing_repeats); ++rep) {
      rom_traj = solve_reduced(model, which, dt, n_steps);
      online_seconds.push_back(rom_traj.wall_time);
    }
  } else {
    TimeWindowSchedule schedule;
    const Index nwin = cfg.n_windows;
    schedule.boundaries.push_back(0.0);
    std::vector<StrategyInfo> infos;
    std::vector<ReducedBasis> bases;
    Index steps_used = 0;
    for (Index w = 0; w < nwin; ++w) {
      const Index steps_here = (n_steps * (w + 1)) / nwin - steps_used;
      steps_used += steps_here;
      schedule.boundaries.push_back(steps_used * dt);
    }
    for (Index w = 0; w < nwin; ++w) {
      const double a = schedule.boundaries[w];
      const double b = schedule.boundaries[w + 1];
      const SnapshotMatrix win_states = window_snapshots(train_states, a, b);
      const SnapshotMatrix win_forces = window_snapshots(train_forces, a, b);
      bases.push_back(window_basis(cfg, *fom, win_states));
      infos.push_back(
          build_strategy(cfg, *fom, bases.back(), win_states, win_forces));
      save_strategy_artifacts(cfg, infos.back(), "_w" + std::to_string(w));
    }
    double np_sum = 0.0;
    double mesh_sum = 0.0;
    double ry_sum = 0.0;
    for (Index w = 0; w < nwin; ++w) {
      ReducedModel model = project_operators(*fom, bases[w]);
      model.strategy = infos[w].strategy;
      schedule.models.push_back(std::move(model));
      np_sum += static_cast<double>(infos[w].n_points);
      mesh_sum += static_cast<double>(infos[w].sample_mesh_elements);
      ry_sum += static_cast<double>(bases[w].retained);
    }
    n_points = static_cast<Index>(std::llround(np_sum / nwin));
    mesh_elements = static_cast<Index>(std::llround(mesh_sum / nwin));
    r_y = static_cast<Index>(std::llround(ry_sum / nwin));

    for (Index rep = 0; rep < std::max<Index>(1, cfg.timing_repeats); ++rep) {
      rom_traj = solve_windowed(schedule, which, dt);
      online_seconds.push_back(rom_traj.wall_time);
    }
  }

  const ErrorWeight weight =
      cfg.norm == "mass" ? ErrorWeight::mass : ErrorWeight::euclidean;
  const Matrix* mass = weight == ErrorWeight::mass ? &fom->mass() : nullptr;
  const ErrorReport err = relative_l2_error_by_field(
      rom_traj.lifted_final, fom_traj.states.back(), fom->field_layout(),
      weight, mass);

  RunRecord rec;
  rec.problem = cfg.problem;
  rec.method = cfg.method;
  rec.er_target = cfg.er_target;
  rec.r_y = r_y;
  rec.n_points = n_points;
  rec.sample_mesh_elements = mesh_elements;
  for (const auto& fe : err.per_field) rec.field_errors[fe.field] = fe.value;
  rec.combined_error = err.combined;
  rec.relative_online_time = median(online_seconds) / fom_traj.loop_seconds;
  rec.mode = cfg.mode();
  rec.solver = cfg.default_solver();
  rec.norm = cfg.norm;
  rec.n_windows = cfg.n_windows;
  rec.config_hash = cfg.hash();
  rec.online_seconds = online_seconds;
  rec.fom_seconds = fom_traj.loop_seconds;

  char np_buf[32];
  std::snprintf(np_buf, sizeof(np_buf), "%td", n_points);
  const std::string stem = cfg.method + "_er" + format_mu(cfg.er_target) +
                           "_np" + np_buf + "_" +
                           rec.config_hash.substr(0, 8);
  const auto record_path =
      cfg.workdir / "records" / ("record_" + stem + ".json");
  save_run_record(record_path, rec);

  // Trajectory summary with a final-state CSV sidecar.
  json traj_json;
  traj_json["t0"] = rom_traj.times.front();
  traj_json["t_end"] = rom_traj.times.back();
  traj_json["dt"] = dt;
  traj_json["n_steps"] = rom_traj.n_steps;
  traj_json["newton_iters_total"] = rom_traj.newton_iters_total;
  traj_json["wall_time"] = rom_traj.wall_time;
  traj_json["final_state_csv"] = ("final_" + stem + ".csv");
  write_json_file(cfg.workdir / "records" / ("trajectory_" + stem + ".json"),
                  traj_json);
  save_vector_csv(cfg.workdir / "records" / ("final_" + stem + ".csv"),
                  rom_traj.lifted_final);
  std::cout << "online: " << cfg.method << " er=" << cfg.er_target
            << " r_y=" << r_y << " n_points=" << n_points
            << " combined_error=" << rec.combined_error
            << " rel_time=" << rec.relative_online_time << " (t_end=" << t_end
            << ")\n";
  return rec;
}

ReportResult cmd_report(const std::vector<RunRecord>& records,
                        const std::filesystem::path& outdir) {
  require(!records.empty(), "report: no records");
  std::filesystem::create_directories(outdir);

  ReportResult result;
  result.records_csv = outdir / "records.csv";

  // Column order: fixed identity fields, then the union of field errors.
  std::set<std::string> field_names;
  for (const auto& r : records) {
    for (const auto& [k, v] : r.field_errors) {
      (void)v;
      field_names.insert(k);
    }
  }

  {
    std::ofstream out(result.records_csv);
    out << std::setprecision(17);
    out << "problem,method,mode,solver,norm,n_windows,er_target,r_y,n_points,"
           "sample_mesh_elements,combined_error";
    for (const auto& f : field_names) out << ",error_" << f;
    out << ",relative_online_time,config_hash\n";
    for (const auto& r : records) {
      out << r.problem << ',' << r.method << ',' << r.mode << ',' << r.solver
          << ',' << r.norm << ',' << r.n_windows << ',' << r.er_target << ','
          << r.r_y << ',' << r.n_points << ',' << r.sample_mesh_elements << ','
          << r.combined_error;
      for (const auto& f : field_names) {
        auto it = r.field_errors.find(f);
        out << ',';
        if (it != r.field_errors.end()) out << it->second;
      }
      out << ',' << r.relative_online_time << ',' << r.config_hash << "\n";
    }
  }

  auto write_front = [&](const std::string& label,
                         std::vector<RunRecord> subset) {
    if (subset.empty()) {
      std::cout << "report: no records for method " << label
                << "; front file omitted\n";
      return;
    }
    const ParetoSet ps = pareto_extract(std::move(subset));
    std::vector<std::pair<double, double>> pts;
    for (Index i : ps.front) {
      pts.emplace_back(ps.records[i].relative_online_time,
                       ps.records[i].combined_error);
    }
    std::sort(pts.begin(), pts.end());
    const auto path = outdir / ("front_" + label + ".csv");
    std::ofstream out(path);
    out << std::setprecision(17);
    out << "relative_online_time,combined_error\n";
    for (const auto& [t, e] : pts) out << t << ',' << e << "\n";
    result.front_files.push_back(path);
  };

  std::set<std::string> methods;
  for (const auto& r : records) methods.insert(r.method);
  for (const auto& m : methods) {
    std::vector<RunRecord> subset;
    for (const auto& r : records) {
      if (r.method == m) subset.push_back(r);
    }
    write_front(m, std::move(subset));
  }
  write_front("overall", records);

  std::cout << "report: wrote " << result.records_csv.string() << " and "
            << result.front_files.size() << " front files\n";
  return result;
}

}  // namespace hyperred
