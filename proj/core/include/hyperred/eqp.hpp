// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hyperred/fom.hpp"
#include "hyperred/pod.hpp"
#include "hyperred/types.hpp"

#include <set>
#include <utility>
#include <vector>

namespace hyperred {

/// Accuracy constraints G over the full quadrature points: one row per
/// (snapshot time, reduced test function) pair, rhs = G * rho.
struct ConstraintMatrix {
  Matrix data;  // n_c x K
  std::vector<std::pair<Index, Index>> row_meta;  // (snapshot index, test index)
  Vector rhs;
};

ConstraintMatrix assemble_constraints(const FomProblem& fom,
                                      const ReducedBasis& psi,
                                      const SnapshotMatrix& snapshots,
                                      const std::vector<Index>& selected_times);

struct ConditioningReport {
  Index dropped_zero_rows = 0;
  Index dropped_dependent_rows = 0;
  Index rows_out = 0;
};

/// Row-rescaled and LQ-orthonormalized constraints. The returned system
/// min ||gc (rho - r)|| is equivalent to the original up to the recorded
/// transform (row scales, kept rows, and the triangular factor).
struct ConditionedConstraints {
  Matrix gc;     // orthonormal rows
  Vector rhs_c;  // L^{-1} (scaled rhs)
  Vector row_scale;             // applied to the surviving original rows
  std::vector<Index> kept_rows; // original row of each scaled row fed to LQ
  Matrix l;                     // triangular factor of the scaled matrix
  ConditioningReport report;
};

ConditionedConstraints condition_constraints(const ConstraintMatrix& g);

struct SparseQuadratureRule {
  Vector weights;              // length K, >= 0
  std::vector<Index> support;  // nonzero positions
  Index k_star = 0;
  double achieved_residual = 0.0;  // ||gc w - rhs_c|| / ||rhs_c||
  double tolerance_used = 0.0;
  bool converged = false;
  bool capped = false;
};

/// Nonnegative sparse reweighting of the full rule fitted to the
/// conditioned constraints. max_points > 0 caps the support size.
SparseQuadratureRule solve_weights(const Matrix& gc, const Vector& rhs_c,
                                   const Vector& rho_full, double tol,
                                   Index max_points = 0);

/// The full rule expressed as a (non-sparse) SparseQuadratureRule.
SparseQuadratureRule full_rule_as_sparse(const FullQuadratureRule& full);

/// Reduced force from the sparse rule: visits only the support points.
Vector evaluate_sparse(const FomProblem& fom, const ReducedBasis& psi,
                       const SparseQuadratureRule& rule, const Vector& state,
                       double t);

/// Elements owning at least one support point.
std::set<Index> sample_mesh_from_rule(const SparseQuadratureRule& rule,
                                      const FullQuadratureRule& full);

}  // namespace hyperred
