// SPDX-License-Identifier: Apache-2.0

#include "hyperred/rom.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <chrono>
#include <cmath>

namespace hyperred {

HrStrategy HrStrategy::interpolation(ObliqueProjector p) {
  HrStrategy s;
  s.kind = Kind::interpolation;
  s.projector = std::move(p);
  return s;
}

HrStrategy HrStrategy::eqp(SparseQuadratureRule r) {
  HrStrategy s;
  s.kind = Kind::eqp;
  s.rule = std::move(r);
  return s;
}

Vector ReducedModel::lift(const Vector& y_hat) const {
  return basis.offset + basis.basis * y_hat;
}

Vector ReducedModel::project(const Vector& y_full) const {
  return basis.basis.transpose() * (y_full - basis.offset);
}

ReducedModel project_operators(const FomProblem& fom, const ReducedBasis& psi) {
  require(psi.basis.rows() == fom.state_dim(),
          "project_operators: dimension mismatch");
  ReducedModel model;
  model.basis = psi;
  model.reduced_mass = psi.basis.transpose() * fom.mass() * psi.basis;
  model.reduced_linear = psi.basis.transpose() * fom.linear_op() * psi.basis;
  model.fom = &fom;
  return model;
}

Vector reduced_force(const ReducedModel& model, const Vector& y_hat, double t) {
  require(y_hat.size() == model.dim(), "reduced_force: coordinate length");
  const Vector lifted = model.lift(y_hat);
  switch (model.strategy.kind) {
    case HrStrategy::Kind::none:
      return model.basis.basis.transpose() *
             model.fom->eval_force_full(lifted, t);
    case HrStrategy::Kind::interpolation: {
      const Vector f_z = model.fom->eval_force_entries(
          lifted, t, model.strategy.projector.samples);
      return model.strategy.projector.contracted * f_z;
    }
    case HrStrategy::Kind::eqp:
      return evaluate_sparse(*model.fom, model.basis, model.strategy.rule,
                             lifted, t);
  }
  throw std::logic_error("reduced_force: bad strategy");
}

namespace {

// Forward-difference Jacobian of the reduced residual; r_y + 1 force
// evaluations per call.
Matrix residual_jacobian(const ReducedModel& model, const Vector& y,
                         const Matrix& lhs_linear, double t) {
  Matrix jac = lhs_linear;
  const Vector f0 = reduced_force(model, y, t);
  Vector perturbed = y;
  for (Index j = 0; j < model.dim(); ++j) {
    const double h = 1e-7 * (1.0 + std::abs(y(j)));
    perturbed(j) = y(j) + h;
    jac.col(j) -= (reduced_force(model, perturbed, t) - f0) / h;
    perturbed(j) = y(j);
  }
  return jac;
}

TrajectoryRecord integrate(const ReducedModel& model, Integrator which,
                           Vector y, double t0, double dt, Index n_steps,
                           double newton_tol) {
  require(dt > 0.0, "solve: dt must be > 0");
  require(n_steps >= 1, "solve: need at least one step");

  TrajectoryRecord traj;
  traj.times.push_back(t0);
  traj.reduced_states.push_back(y);

  const Matrix& m_hat = model.reduced_mass;
  const Matrix& a_hat = model.reduced_linear;

  const auto t_start = std::chrono::steady_clock::now();

  if (which == Integrator::backward_euler) {
    const Matrix lhs_linear = m_hat / dt + a_hat;
    for (Index step = 0; step < n_steps; ++step) {
      const double t_next = t0 + (step + 1) * dt;
      const Vector y_prev = y;
      const double scale = 1.0 + (m_hat * y_prev / dt).norm();

      bool done = false;
      for (int it = 0; it < 25; ++it) {
        const Vector residual = m_hat * (y - y_prev) / dt + a_hat * y -
                                reduced_force(model, y, t_next);
        ++traj.newton_iters_total;
        if (residual.norm() <= newton_tol * scale) {
          done = true;
          break;
        }
        const Matrix jac = residual_jacobian(model, y, lhs_linear, t_next);
        y -= Eigen::PartialPivLU<Matrix>(jac).solve(residual);
      }
      if (!done) {
        throw std::runtime_error("ROM Newton diverged at step " +
                                 std::to_string(step + 1));
      }
      traj.times.push_back(t_next);
      traj.reduced_states.push_back(y);
      ++traj.n_steps;
    }
  } else {
    const Eigen::LLT<Matrix> mass_chol(m_hat);
    require(mass_chol.info() == Eigen::Success, "solve: reduced mass not SPD");
    auto rate = [&](const Vector& v, double t) -> Vector {
      return mass_chol.solve(reduced_force(model, v, t) - a_hat * v);
    };
    for (Index step = 0; step < n_steps; ++step) {
      const double t = t0 + step * dt;
      const Vector k1 = rate(y, t);
      const Vector k2 = rate(y + 0.5 * dt * k1, t + 0.5 * dt);
      const Vector k3 = rate(y + 0.5 * dt * k2, t + 0.5 * dt);
      const Vector k4 = rate(y + dt * k3, t + dt);
      y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!y.allFinite()) {
        throw std::runtime_error("ROM RK4 blew up at step " +
                                 std::to_string(step + 1));
      }
      traj.times.push_back(t + dt);
      traj.reduced_states.push_back(y);
      ++traj.n_steps;
    }
  }

  traj.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  traj.lifted_final = model.lift(y);
  return traj;
}

}  // namespace

TrajectoryRecord solve_backward_euler(const ReducedModel& model, double dt,
                                      Index n_steps, double newton_tol) {
  return integrate(model, Integrator::backward_euler,
                   model.project(model.fom->initial_state()), 0.0, dt, n_steps,
                   newton_tol);
}

TrajectoryRecord solve_rk4(const ReducedModel& model, double dt, Index n_steps) {
  return integrate(model, Integrator::rk4,
                   model.project(model.fom->initial_state()), 0.0, dt, n_steps,
                   1e-10);
}

TrajectoryRecord solve_reduced(const ReducedModel& model, Integrator which,
                               double dt, Index n_steps, double newton_tol) {
  return integrate(model, which, model.project(model.fom->initial_state()), 0.0,
                   dt, n_steps, newton_tol);
}

TrajectoryRecord solve_windowed(const TimeWindowSchedule& schedule,
                                Integrator which, double dt,
                                double newton_tol) {
  require(!schedule.models.empty(), "solve_windowed: no windows");
  require(schedule.models.size() + 1 == schedule.boundaries.size(),
          "solve_windowed: boundary/model count mismatch");
  require(schedule.boundaries.front() == 0.0,
          "solve_windowed: first boundary must be 0");

  TrajectoryRecord out;
  Vector carried;
  for (size_t w = 0; w < schedule.models.size(); ++w) {
    const double a = schedule.boundaries[w];
    const double b = schedule.boundaries[w + 1];
    require(b > a, "solve_windowed: boundaries must increase");
    const Index steps = static_cast<Index>(std::llround((b - a) / dt));
    require(steps >= 1 && std::abs(steps * dt - (b - a)) <= 1e-9 * (b - a),
            "solve_windowed: window span must be a whole number of steps");

    const ReducedModel& model = schedule.models[w];
    const Vector y0 = w == 0 ? model.project(model.fom->initial_state())
                             : model.project(carried);
    TrajectoryRecord piece =
        integrate(model, which, y0, a, dt, steps, newton_tol);

    const size_t skip = out.times.empty() ? 0 : 1;  // boundary state repeats
    for (size_t i = skip; i < piece.times.size(); ++i) {
      out.times.push_back(piece.times[i]);
      out.reduced_states.push_back(piece.reduced_states[i]);
    }
    out.n_steps += piece.n_steps;
    out.newton_iters_total += piece.newton_iters_total;
    out.wall_time += piece.wall_time;
    out.lifted_final = piece.lifted_final;
    carried = piece.lifted_final;
  }
  return out;
}

ErrorReport relative_l2_error_by_field(const Vector& rom_final,
                                       const Vector& fom_final,
                                       const std::vector<FieldSpan>& layout,
                                       ErrorWeight weight, const Matrix* mass) {
  require(rom_final.size() == fom_final.size(),
          "relative_l2_error: length mismatch");
  require(weight == ErrorWeight::euclidean || mass != nullptr,
          "relative_l2_error: mass weight needs the mass matrix");

  auto weighted_sq = [&](const Vector& v, Index off, Index len) -> double {
    const Vector seg = v.segment(off, len);
    if (weight == ErrorWeight::euclidean) return seg.squaredNorm();
    return seg.dot(mass->block(off, off, len, len) * seg);
  };

  ErrorReport rep;
  double num = 0.0;
  double den = 0.0;
  const Vector diff = rom_final - fom_final;
  for (const FieldSpan& f : layout) {
    const double d2 = weighted_sq(diff, f.offset, f.length);
    const double r2 = weighted_sq(fom_final, f.offset, f.length);
    require(r2 > 0.0,
            "relative_l2_error: zero-norm reference for field " + f.name);
    rep.per_field.push_back({f.name, std::sqrt(d2 / r2)});
    num += d2;
    den += r2;
  }
  rep.combined = std::sqrt(num / den);
  return rep;
}

double relative_l2_error(const Vector& rom_final, const Vector& fom_final,
                         const std::vector<FieldSpan>& layout,
                         ErrorWeight weight, const Matrix* mass) {
  return relative_l2_error_by_field(rom_final, fom_final, layout, weight, mass)
      .combined;
}

}  // namespace hyperred
