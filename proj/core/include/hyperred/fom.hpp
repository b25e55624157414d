// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hyperred/interp_hr.hpp"
#include "hyperred/pod.hpp"
#include "hyperred/types.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace hyperred {

struct FieldSpan {
  std::string name;
  Index offset = 0;
  Index length = 0;
};

struct FullQuadratureRule {
  Vector weights;                       // strictly positive, length K
  std::vector<Index> point_to_element;  // total map

  Index n_points() const { return weights.size(); }
};

/// Unweighted integrand values at one quadrature point against each
/// local test function, with the global dofs they scatter to.
struct PointContribution {
  std::vector<Index> dofs;
  Vector values;
};

/// Nonlinear semi-discrete system M dy/dt + A y = f(y, t).
class FomProblem {
 public:
  virtual ~FomProblem() = default;

  Index state_dim() const { return initial_state_.size(); }
  const std::string& name() const { return name_; }
  const Matrix& mass() const { return mass_; }
  const Matrix& linear_op() const { return linear_op_; }
  const FullQuadratureRule& quadrature() const { return quadrature_; }
  const Vector& initial_state() const { return initial_state_; }
  double parameter() const { return parameter_; }
  const std::vector<FieldSpan>& field_layout() const { return field_layout_; }

  /// Full-rule assembly of the nonlinear force.
  Vector eval_force_full(const Vector& state, double t) const;

  /// Entries of the force at the sampled indices only, assembling just
  /// the elements adjacent to those degrees of freedom.
  Vector eval_force_entries(const Vector& state, double t,
                            const SampleIndexSet& indices) const;

  /// Length-r_y contraction of the integrand at one quadrature point
  /// against the rows of psi. Weighted summation over all points
  /// reproduces psi^T eval_force_full.
  Vector eval_integrand_contracted(const Vector& state, double t,
                                   Index quad_index,
                                   const ReducedBasis& psi) const;

  /// Elements adjacent to the sampled degrees of freedom.
  std::set<Index> sample_mesh_from_indices(const SampleIndexSet& indices) const;

  /// Dense d f / d state. Default is forward differences; benchmarks
  /// with implicit solvers override with the analytic form.
  virtual Matrix force_jacobian(const Vector& state, double t) const;

  virtual void integrand_at_point(const Vector& state, double t, Index k,
                                  PointContribution& out) const = 0;
  virtual std::vector<Index> elements_adjacent_to_dof(Index dof) const = 0;
  virtual std::vector<Index> points_of_element(Index element) const;

 protected:
  std::string name_;
  Matrix mass_;
  Matrix linear_op_;
  FullQuadratureRule quadrature_;
  Vector initial_state_;
  double parameter_ = 0.0;
  std::vector<FieldSpan> field_layout_;
};

/// 2D nonlinear diffusion on the unit square: bilinear quads, 2x2 Gauss
/// points per element, conductivity kappa(p) = kappa0 + kappa1 * p,
/// natural (zero-flux) boundary. The initial pressure is the nodal
/// interpolant of the indicator of the square |x - 0.5|_inf < mu.
std::unique_ptr<FomProblem> make_nonlinear_diffusion(Index nx, Index ny,
                                                     double mu,
                                                     double kappa0 = 2.0,
                                                     double kappa1 = 1.0);

/// 1D visco-hyperelastic bar on [0, 8]: quadratic elements, 3-point
/// Gauss rule, state (velocity, position), left end fixed. Initial
/// velocity -(mu/80) sin(mu X), initial position the identity map.
struct BarMaterial {
  double density = 1.0;
  double shear_modulus = 0.25;
  double bulk_modulus = 5.0;
  double volume_scale = 1.0;
  double viscosity = 0.01;
};

std::unique_ptr<FomProblem> make_hyperelastic_bar(Index n_elem, double mu,
                                                  const BarMaterial& mat = {});

struct FomTrajectory {
  std::vector<double> times;
  std::vector<Vector> states;  // includes the initial state
  double loop_seconds = 0.0;
  Index newton_iters_total = 0;
};

/// Integrators start from fom.initial_state() unless another state (and
/// start time) is supplied, e.g. for restarts.
FomTrajectory solve_fom_backward_euler(const FomProblem& fom, double dt,
                                       Index n_steps, double newton_tol = 1e-10,
                                       const Vector* initial = nullptr,
                                       double t0 = 0.0);

FomTrajectory solve_fom_rk4(const FomProblem& fom, double dt, Index n_steps,
                            const Vector* initial = nullptr, double t0 = 0.0);

}  // namespace hyperred
