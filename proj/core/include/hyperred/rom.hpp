// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hyperred/eqp.hpp"
#include "hyperred/fom.hpp"
#include "hyperred/interp_hr.hpp"
#include "hyperred/pod.hpp"
#include "hyperred/types.hpp"

#include <string>
#include <vector>

namespace hyperred {

/// How the reduced nonlinear force is evaluated online.
struct HrStrategy {
  enum class Kind { none, interpolation, eqp };
  Kind kind = Kind::none;
  ObliqueProjector projector;    // interpolation
  SparseQuadratureRule rule;     // eqp

  static HrStrategy none() { return {}; }
  static HrStrategy interpolation(ObliqueProjector p);
  static HrStrategy eqp(SparseQuadratureRule r);
};

struct ReducedModel {
  ReducedBasis basis;
  Matrix reduced_mass;    // psi^T M psi
  Matrix reduced_linear;  // psi^T A psi
  HrStrategy strategy;
  const FomProblem* fom = nullptr;  // non-owning

  Index dim() const { return basis.retained; }
  Vector lift(const Vector& y_hat) const;
  Vector project(const Vector& y_full) const;
};

ReducedModel project_operators(const FomProblem& fom, const ReducedBasis& psi);

Vector reduced_force(const ReducedModel& model, const Vector& y_hat, double t);

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<Vector> reduced_states;
  Vector lifted_final;
  double wall_time = 0.0;  // seconds, stepping loop only
  Index n_steps = 0;
  Index newton_iters_total = 0;
};

TrajectoryRecord solve_backward_euler(const ReducedModel& model, double dt,
                                      Index n_steps, double newton_tol = 1e-10);

TrajectoryRecord solve_rk4(const ReducedModel& model, double dt, Index n_steps);

enum class Integrator { backward_euler, rk4 };

TrajectoryRecord solve_reduced(const ReducedModel& model, Integrator which,
                               double dt, Index n_steps,
                               double newton_tol = 1e-10);

/// Per-window reduced models over a partition of [0, T]. Boundaries
/// must start at 0, increase strictly, and align with whole steps.
struct TimeWindowSchedule {
  std::vector<double> boundaries;    // size n_windows + 1
  std::vector<ReducedModel> models;  // size n_windows
};

TrajectoryRecord solve_windowed(const TimeWindowSchedule& schedule,
                                Integrator which, double dt,
                                double newton_tol = 1e-10);

enum class ErrorWeight { euclidean, mass };

struct FieldError {
  std::string field;
  double value = 0.0;
};

struct ErrorReport {
  std::vector<FieldError> per_field;
  double combined = 0.0;
};

/// Relative error per field, combined as the product norm over fields.
ErrorReport relative_l2_error_by_field(const Vector& rom_final,
                                       const Vector& fom_final,
                                       const std::vector<FieldSpan>& layout,
                                       ErrorWeight weight,
                                       const Matrix* mass = nullptr);

double relative_l2_error(const Vector& rom_final, const Vector& fom_final,
                         const std::vector<FieldSpan>& layout,
                         ErrorWeight weight = ErrorWeight::euclidean,
                         const Matrix* mass = nullptr);

}  // namespace hyperred
