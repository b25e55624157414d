#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperred/fom.hpp"
#include "hyperred/pod.hpp"
#include "hyperred/rom.hpp"
#include "support/oracles.hpp"

using namespace hyperred;

namespace {

// Scalar system M y' + a y = 0 with unit mass; zero nonlinear force.
class ScalarDecay final : public FomProblem {
 public:
  explicit ScalarDecay(double a) {
    name_ = "scalar";
    mass_ = Matrix::Identity(1, 1);
    linear_op_ = Matrix::Constant(1, 1, a);
    quadrature_.weights = Vector::Ones(1);
    quadrature_.point_to_element = {0};
    initial_state_ = Vector::Ones(1);
    field_layout_ = {{"value", 0, 1}};
  }

  void integrand_at_point(const Vector&, double, Index,
                          PointContribution& out) const override {
    out.dofs = {0};
    out.values = Vector::Zero(1);
  }

  std::vector<Index> elements_adjacent_to_dof(Index) const override {
    return {0};
  }
};

ReducedBasis identity_basis(Index n) {
  ReducedBasis b;
  b.basis = Matrix::Identity(n, n);
  b.singular_values = Vector::Ones(n);
  b.offset = Vector::Zero(n);
  b.retained = n;
  return b;
}

ReducedBasis basis_from_trajectory(const FomProblem& fom,
                                   const FomTrajectory& traj, double er) {
  const SnapshotMatrix snaps =
      assemble_snapshots(traj.states, OffsetMode::zero, traj.times);
  return make_reduced_basis_for_energy(snaps, er);
}

}  // namespace

TEST_SUITE_BEGIN("rom");

TEST_CASE("project_operators with the identity basis is the FOM") {
  const auto fom = make_nonlinear_diffusion(3, 3, 0.3);
  const ReducedModel model =
      project_operators(*fom, identity_basis(fom->state_dim()));
  CHECK((model.reduced_mass - fom->mass()).norm() <= 1e-13);
  CHECK((model.reduced_linear - fom->linear_op()).norm() <= 1e-13);
}

TEST_CASE("project_operators single column gives a positive scalar mass") {
  const auto fom = make_nonlinear_diffusion(3, 3, 0.3);
  std::mt19937 gen(1);
  ReducedBasis b;
  b.basis = oracles::random_orthonormal(fom->state_dim(), 1, gen);
  b.singular_values = Vector::Ones(1);
  b.offset = Vector::Zero(fom->state_dim());
  b.retained = 1;
  const ReducedModel model = project_operators(*fom, b);
  CHECK(model.reduced_mass(0, 0) > 0.0);
}

TEST_CASE("reduced mass is symmetric") {
  const auto fom = make_nonlinear_diffusion(4, 4, 0.3);
  std::mt19937 gen(2);
  ReducedBasis b;
  b.basis = oracles::random_orthonormal(fom->state_dim(), 5, gen);
  b.singular_values = Vector::Ones(5);
  b.offset = Vector::Zero(fom->state_dim());
  b.retained = 5;
  const ReducedModel model = project_operators(*fom, b);
  CHECK((model.reduced_mass - model.reduced_mass.transpose()).norm() <= 1e-12);
}

TEST_CASE("reduced_force none equals the composed oracle") {
  const auto fom = make_nonlinear_diffusion(4, 4, 0.3);
  std::mt19937 gen(3);
  ReducedBasis b;
  b.basis = oracles::random_orthonormal(fom->state_dim(), 4, gen);
  b.singular_values = Vector::Ones(4);
  b.offset = Vector::Zero(fom->state_dim());
  b.retained = 4;
  ReducedModel model = project_operators(*fom, b);
  const Vector y_hat = oracles::random_vector(4, gen);
  const Vector expect =
      b.basis.transpose() * fom->eval_force_full(b.basis * y_hat, 0.0);
  CHECK((reduced_force(model, y_hat, 0.0) - expect).norm() <= 1e-13);
}

TEST_CASE("eqp strategy with the full rule equals none") {
  const auto fom = make_nonlinear_diffusion(5, 5, 0.3);
  const FomTrajectory traj = solve_fom_backward_euler(*fom, 1e-3, 8);
  const ReducedBasis psi = basis_from_trajectory(*fom, traj, 6.0);
  ReducedModel plain = project_operators(*fom, psi);
  ReducedModel full_eqp = plain;
  full_eqp.strategy = HrStrategy::eqp(full_rule_as_sparse(fom->quadrature()));
  std::mt19937 gen(4);
  for (int trial = 0; trial < 4; ++trial) {
    const Vector y_hat = oracles::random_vector(psi.retained, gen);
    const Vector a = reduced_force(plain, y_hat, 0.0);
    const Vector b = reduced_force(full_eqp, y_hat, 0.0);
    CHECK((a - b).norm() <= 1e-12 * std::max(1.0, a.norm()));
  }
}

TEST_CASE("interpolation with full sampling is exact inside the force span") {
  const auto fom = make_nonlinear_diffusion(4, 4, 0.3);
  const FomTrajectory traj = solve_fom_backward_euler(*fom, 1e-3, 10);

  // Exact-rank state and force bases from the same trajectory.
  std::vector<Vector> forces;
  for (size_t i = 0; i < traj.states.size(); ++i) {
    forces.push_back(fom->eval_force_full(traj.states[i], traj.times[i]));
  }
  const SnapshotMatrix state_snaps =
      assemble_snapshots(traj.states, OffsetMode::zero, traj.times);
  const SnapshotMatrix force_snaps =
      assemble_snapshots(forces, OffsetMode::zero, traj.times);
  const ReducedBasis psi = make_reduced_basis_for_energy(state_snaps, 15.0);
  auto [fu, fsigma] = compute_basis(force_snaps);
  Index r_f = 0;
  while (r_f < fsigma.size() && fsigma(r_f) > 1e-9 * fsigma(0)) ++r_f;
  const ForceBasis xi{fu.leftCols(r_f), fsigma};

  SampleIndexSet all;
  for (Index i = 0; i < fom->state_dim(); ++i) all.indices.push_back(i);
  all.source_basis_cols = r_f;

  ReducedModel plain = project_operators(*fom, psi);
  ReducedModel gappy = plain;
  gappy.strategy = HrStrategy::interpolation(build_projector(xi, all, &psi));

  // Training states lift exactly, so the force lies in span(Xi).
  const Vector y_hat = plain.project(traj.states[5]);
  const Vector a = reduced_force(plain, y_hat, traj.times[5]);
  const Vector b = reduced_force(gappy, y_hat, traj.times[5]);
  CHECK((a - b).norm() <= 1e-9 * std::max(1.0, a.norm()));
}

TEST_CASE("backward Euler with zero force and operator is constant") {
  ScalarDecay fom(0.0);
  ReducedModel model = project_operators(fom, identity_basis(1));
  const TrajectoryRecord traj = solve_backward_euler(model, 0.1, 20);
  CHECK(traj.lifted_final(0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("backward Euler linear limit matches the dense FOM path") {
  const auto fom = make_nonlinear_diffusion(4, 4, 0.3, 2.0, 0.0);
  const FomTrajectory dense = solve_fom_backward_euler(*fom, 1e-3, 25, 1e-12);
  ReducedModel model =
      project_operators(*fom, identity_basis(fom->state_dim()));
  const TrajectoryRecord rom = solve_backward_euler(model, 1e-3, 25, 1e-12);
  CHECK((rom.lifted_final - dense.states.back()).norm() <=
        1e-9 * dense.states.back().norm());
}

TEST_CASE("rk4 zero dynamics is constant") {
  ScalarDecay fom(0.0);
  ReducedModel model = project_operators(fom, identity_basis(1));
  const TrajectoryRecord traj = solve_rk4(model, 0.1, 10);
  CHECK(traj.lifted_final(0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rk4 scalar decay matches the Taylor polynomial step") {
  ScalarDecay fom(1.0);  // y' = -y
  ReducedModel model = project_operators(fom, identity_basis(1));
  const TrajectoryRecord traj = solve_rk4(model, 0.1, 1);
  const double h = 0.1;
  const double expect =
      1.0 - h + h * h / 2.0 - h * h * h / 6.0 + h * h * h * h / 24.0;
  CHECK(traj.reduced_states.back()(0) ==
        doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("bar ROM keeps the fixed end at zero") {
  const auto fom = make_hyperelastic_bar(16, 1.0);
  const FomTrajectory traj = solve_fom_rk4(*fom, 0.01, 60);
  const ReducedBasis psi = basis_from_trajectory(*fom, traj, 8.0);
  ReducedModel model = project_operators(*fom, psi);
  const TrajectoryRecord rom = solve_rk4(model, 0.01, 60);
  for (const auto& y_hat : rom.reduced_states) {
    const Vector lifted = model.lift(y_hat);
    CHECK(std::abs(lifted(0)) <= 1e-12);
  }
}

TEST_CASE("single window equals the plain solver") {
  const auto fom = make_nonlinear_diffusion(4, 4, 0.3);
  const FomTrajectory traj = solve_fom_backward_euler(*fom, 1e-3, 10);
  const ReducedBasis psi = basis_from_trajectory(*fom, traj, 5.0);
  ReducedModel model = project_operators(*fom, psi);

  TimeWindowSchedule schedule;
  schedule.boundaries = {0.0, 0.01};
  schedule.models = {model};
  const TrajectoryRecord windowed =
      solve_windowed(schedule, Integrator::backward_euler, 1e-3);
  const TrajectoryRecord plain = solve_backward_euler(model, 1e-3, 10);
  CHECK((windowed.lifted_final - plain.lifted_final).norm() <= 1e-14);
  CHECK(windowed.n_steps == plain.n_steps);
}

TEST_CASE("two windows with identical bases match the single window") {
  const auto fom = make_nonlinear_diffusion(4, 4, 0.3);
  const FomTrajectory traj = solve_fom_backward_euler(*fom, 1e-3, 10);
  const ReducedBasis psi = basis_from_trajectory(*fom, traj, 6.0);
  ReducedModel model = project_operators(*fom, psi);

  TimeWindowSchedule schedule;
  schedule.boundaries = {0.0, 0.005, 0.01};
  schedule.models = {model, model};
  const TrajectoryRecord windowed =
      solve_windowed(schedule, Integrator::backward_euler, 1e-3);
  const TrajectoryRecord plain = solve_backward_euler(model, 1e-3, 10);
  CHECK((windowed.lifted_final - plain.lifted_final).norm() <=
        1e-12 * plain.lifted_final.norm());
}

TEST_CASE("identity basis in the second window reproduces a FOM restart") {
  const auto fom = make_nonlinear_diffusion(3, 3, 0.3);
  const FomTrajectory traj = solve_fom_backward_euler(*fom, 1e-3, 10);
  const ReducedBasis psi = basis_from_trajectory(*fom, traj, 4.0);
  ReducedModel coarse = project_operators(*fom, psi);
  ReducedModel exact =
      project_operators(*fom, identity_basis(fom->state_dim()));

  TimeWindowSchedule schedule;
  schedule.boundaries = {0.0, 0.005, 0.01};
  schedule.models = {coarse, exact};
  const TrajectoryRecord windowed =
      solve_windowed(schedule, Integrator::backward_euler, 1e-3, 1e-12);

  const TrajectoryRecord half = solve_backward_euler(coarse, 1e-3, 5, 1e-12);
  const Vector handoff = half.lifted_final;
  const FomTrajectory restart =
      solve_fom_backward_euler(*fom, 1e-3, 5, 1e-12, &handoff, 0.005);
  CHECK((windowed.lifted_final - restart.states.back()).norm() <=
        1e-9 * restart.states.back().norm());
}

TEST_CASE("relative error hand values") {
  const std::vector<FieldSpan> layout = {{"all", 0, 2}};
  Vector fom_v(2), rom_v(2);
  fom_v << 3, 4;
  rom_v << 3, 1;
  CHECK(relative_l2_error(rom_v, fom_v, layout) ==
        doctest::Approx(3.0 / 5.0).epsilon(1e-14));
  CHECK(relative_l2_error(fom_v, fom_v, layout) == doctest::Approx(0.0));
  CHECK(relative_l2_error(2.0 * fom_v, fom_v, layout) == doctest::Approx(1.0));
}

TEST_CASE("relative error rejects a zero reference") {
  const std::vector<FieldSpan> layout = {{"all", 0, 2}};
  CHECK_THROWS_AS(
      relative_l2_error(Vector::Ones(2), Vector::Zero(2), layout),
      std::invalid_argument);
}

TEST_CASE("mass-weighted error uses the field blocks") {
  const auto fom = make_nonlinear_diffusion(3, 3, 0.3);
  std::mt19937 gen(6);
  const Vector ref = Vector::Ones(fom->state_dim());
  const Vector rom = ref + 0.1 * oracles::random_vector(fom->state_dim(), gen);
  const double e = relative_l2_error(rom, ref, fom->field_layout(),
                                     ErrorWeight::mass, &fom->mass());
  const Vector d = rom - ref;
  const double expect = std::sqrt(d.dot(fom->mass() * d)) /
                        std::sqrt(ref.dot(fom->mass() * ref));
  CHECK(e == doctest::Approx(expect).epsilon(1e-12));
}

TEST_SUITE_END();
