// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "hyperred/eqp.hpp"
#include "hyperred/fom.hpp"
#include "hyperred/pod.hpp"
#include "hyperred/rom.hpp"

using namespace hyperred;

namespace {

struct Setup {
  std::unique_ptr<FomProblem> fom;
  ReducedModel plain;
  ReducedModel gappy;
  ReducedModel eqp_model;
  Vector y_hat;

  Setup() {
    fom = make_nonlinear_diffusion(16, 16, 0.3);
    const FomTrajectory traj = solve_fom_backward_euler(*fom, 1e-3, 40);
    const SnapshotMatrix snaps =
        assemble_snapshots(traj.states, OffsetMode::zero, traj.times);
    const ReducedBasis psi = make_reduced_basis_for_energy(snaps, 4.0);

    std::vector<Vector> forces;
    for (size_t i = 0; i < traj.states.size(); ++i) {
      forces.push_back(fom->eval_force_full(traj.states[i], traj.times[i]));
    }
    const SnapshotMatrix fsnaps =
        assemble_snapshots(forces, OffsetMode::zero, traj.times);
    auto [fu, fsigma] = compute_basis(fsnaps);
    const Index r_f = truncate_for_energy(fsigma, 4.0);
    const ForceBasis xi{fu.leftCols(r_f), fsigma};
    const SampleIndexSet z = sopt(xi, 2 * r_f);

    plain = project_operators(*fom, psi);
    gappy = plain;
    gappy.strategy = HrStrategy::interpolation(build_projector(xi, z, &psi));

    std::vector<Index> times;
    for (Index j = 0; j < snaps.n_snapshots(); j += 2) times.push_back(j);
    const auto g = assemble_constraints(*fom, psi, snaps, times);
    const auto cc = condition_constraints(g);
    eqp_model = plain;
    eqp_model.strategy = HrStrategy::eqp(solve_weights(
        cc.gc, cc.rhs_c, fom->quadrature().weights, 1e-4));

    y_hat = plain.project(traj.states.back());
  }
};

Setup& setup() {
  static Setup s;
  return s;
}

}  // namespace

static void ReducedForceFull(benchmark::State& state) {
  auto& s = setup();
  for (auto _ : state) {
    Vector f = reduced_force(s.plain, s.y_hat, 0.05);
    benchmark::DoNotOptimize(f.data());
  }
}
BENCHMARK(ReducedForceFull);

static void ReducedForceInterpolation(benchmark::State& state) {
  auto& s = setup();
  for (auto _ : state) {
    Vector f = reduced_force(s.gappy, s.y_hat, 0.05);
    benchmark::DoNotOptimize(f.data());
  }
}
BENCHMARK(ReducedForceInterpolation);

static void ReducedForceEqp(benchmark::State& state) {
  auto& s = setup();
  for (auto _ : state) {
    Vector f = reduced_force(s.eqp_model, s.y_hat, 0.05);
    benchmark::DoNotOptimize(f.data());
  }
}
BENCHMARK(ReducedForceEqp);
