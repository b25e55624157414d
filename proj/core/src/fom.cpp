// SPDX-License-Identifier: Apache-2.0

#include "hyperred/fom.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <chrono>
#include <cmath>

namespace hyperred {

Vector FomProblem::eval_force_full(const Vector& state, double t) const {
  require(state.size() == state_dim(), "eval_force_full: state length");
  require_finite(state, "eval_force_full");

  Vector f = Vector::Zero(state_dim());
  PointContribution c;
  for (Index k = 0; k < quadrature_.n_points(); ++k) {
    integrand_at_point(state, t, k, c);
    const double w = quadrature_.weights(k);
    for (size_t a = 0; a < c.dofs.size(); ++a) {
      f(c.dofs[a]) += w * c.values(static_cast<Index>(a));
    }
  }
  return f;
}

Vector FomProblem::eval_force_entries(const Vector& state, double t,
                                      const SampleIndexSet& indices) const {
  require(state.size() == state_dim(), "eval_force_entries: state length");

  std::set<Index> elements = sample_mesh_from_indices(indices);
  Vector partial = Vector::Zero(state_dim());
  PointContribution c;
  for (Index e : elements) {
    for (Index k : points_of_element(e)) {
      integrand_at_point(state, t, k, c);
      const double w = quadrature_.weights(k);
      for (size_t a = 0; a < c.dofs.size(); ++a) {
        partial(c.dofs[a]) += w * c.values(static_cast<Index>(a));
      }
    }
  }

  Vector out(indices.size());
  for (Index j = 0; j < indices.size(); ++j) {
    out(j) = partial(indices.indices[j]);
  }
  return out;
}

Vector FomProblem::eval_integrand_contracted(const Vector& state, double t,
                                             Index quad_index,
                                             const ReducedBasis& psi) const {
  require(quad_index >= 0 && quad_index < quadrature_.n_points(),
          "eval_integrand_contracted: quad index out of range");
  PointContribution c;
  integrand_at_point(state, t, quad_index, c);
  Vector out = Vector::Zero(psi.retained);
  for (size_t a = 0; a < c.dofs.size(); ++a) {
    out += c.values(static_cast<Index>(a)) *
           psi.basis.row(c.dofs[a]).transpose();
  }
  return out;
}

std::set<Index> FomProblem::sample_mesh_from_indices(
    const SampleIndexSet& indices) const {
  std::set<Index> elements;
  for (Index dof : indices.indices) {
    require(dof >= 0 && dof < state_dim(),
            "sample_mesh_from_indices: dof out of range");
    for (Index e : elements_adjacent_to_dof(dof)) elements.insert(e);
  }
  return elements;
}

std::vector<Index> FomProblem::points_of_element(Index element) const {
  std::vector<Index> pts;
  for (Index k = 0; k < quadrature_.n_points(); ++k) {
    if (quadrature_.point_to_element[k] == element) pts.push_back(k);
  }
  return pts;
}

Matrix FomProblem::force_jacobian(const Vector& state, double t) const {
  const Index n = state_dim();
  Matrix jac(n, n);
  const Vector f0 = eval_force_full(state, t);
  Vector perturbed = state;
  for (Index j = 0; j < n; ++j) {
    const double h = 1e-7 * (1.0 + std::abs(state(j)));
    perturbed(j) = state(j) + h;
    jac.col(j) = (eval_force_full(perturbed, t) - f0) / h;
    perturbed(j) = state(j);
  }
  return jac;
}

FomTrajectory solve_fom_backward_euler(const FomProblem& fom, double dt,
                                       Index n_steps, double newton_tol,
                                       const Vector* initial, double t0) {
  require(dt > 0.0, "solve_fom_backward_euler: dt must be > 0");
  require(n_steps >= 1, "solve_fom_backward_euler: need at least one step");

  const Matrix& m = fom.mass();
  const Matrix& a = fom.linear_op();

  FomTrajectory traj;
  traj.times.push_back(t0);
  traj.states.push_back(initial != nullptr ? *initial : fom.initial_state());

  const auto t_start = std::chrono::steady_clock::now();
  Vector y = traj.states.front();
  for (Index step = 0; step < n_steps; ++step) {
    const double t_next = t0 + (step + 1) * dt;
    const Vector rhs = m * y / dt;
    const double scale = 1.0 + rhs.norm();

    Vector y_next = y;
    bool done = false;
    for (int it = 0; it < 25; ++it) {
      const Vector residual =
          m * (y_next - y) / dt + a * y_next - fom.eval_force_full(y_next, t_next);
      ++traj.newton_iters_total;
      if (residual.norm() <= newton_tol * scale) {
        done = true;
        break;
      }
      const Matrix jac = m / dt + a - fom.force_jacobian(y_next, t_next);
      y_next -= Eigen::PartialPivLU<Matrix>(jac).solve(residual);
    }
    if (!done) {
      throw std::runtime_error("FOM Newton diverged at step " +
                               std::to_string(step + 1));
    }
    y = y_next;
    traj.times.push_back(t_next);
    traj.states.push_back(y);
  }
  traj.loop_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return traj;
}

FomTrajectory solve_fom_rk4(const FomProblem& fom, double dt, Index n_steps,
                            const Vector* initial, double t0) {
  require(dt > 0.0, "solve_fom_rk4: dt must be > 0");
  require(n_steps >= 1, "solve_fom_rk4: need at least one step");

  const Eigen::LLT<Matrix> mass_chol(fom.mass());
  require(mass_chol.info() == Eigen::Success, "solve_fom_rk4: mass not SPD");
  const Matrix& a = fom.linear_op();

  auto rate = [&](const Vector& y, double t) -> Vector {
    return mass_chol.solve(fom.eval_force_full(y, t) - a * y);
  };

  FomTrajectory traj;
  traj.times.push_back(t0);
  traj.states.push_back(initial != nullptr ? *initial : fom.initial_state());

  const auto t_start = std::chrono::steady_clock::now();
  Vector y = traj.states.front();
  for (Index step = 0; step < n_steps; ++step) {
    const double t = t0 + step * dt;
    const Vector k1 = rate(y, t);
    const Vector k2 = rate(y + 0.5 * dt * k1, t + 0.5 * dt);
    const Vector k3 = rate(y + 0.5 * dt * k2, t + 0.5 * dt);
    const Vector k4 = rate(y + dt * k3, t + dt);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!y.allFinite()) {
      throw std::runtime_error("FOM RK4 blew up at step " +
                               std::to_string(step + 1));
    }
    traj.times.push_back(t0 + (step + 1) * dt);
    traj.states.push_back(y);
  }
  traj.loop_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return traj;
}

}  // namespace hyperred
