// SPDX-License-Identifier: Apache-2.0

#include "hyperred/eqp.hpp"

#include "hyperred/nnls.hpp"
#include "hyperred/numerics.hpp"

#include <cmath>
#include <string>

namespace hyperred {

ConstraintMatrix assemble_constraints(const FomProblem& fom,
                                      const ReducedBasis& psi,
                                      const SnapshotMatrix& snapshots,
                                      const std::vector<Index>& selected_times) {
  require(!selected_times.empty(), "assemble_constraints: no snapshots selected");
  require(psi.basis.rows() == fom.state_dim(),
          "assemble_constraints: basis/problem dimension mismatch");
  require(snapshots.state_dim() == fom.state_dim(),
          "assemble_constraints: snapshot/problem dimension mismatch");

  const Index r = psi.retained;
  const Index k_total = fom.quadrature().n_points();
  const Index n_t = static_cast<Index>(selected_times.size());

  ConstraintMatrix out;
  out.data.resize(n_t * r, k_total);
  out.row_meta.reserve(n_t * r);
  for (Index s = 0; s < n_t; ++s) {
    for (Index j = 0; j < r; ++j) out.row_meta.emplace_back(selected_times[s], j);
  }

  for (Index s = 0; s < n_t; ++s) {
    const Index col = selected_times[s];
    require(col >= 0 && col < snapshots.n_snapshots(),
            "assemble_constraints: snapshot index out of range");
    const Vector state = snapshots.offset + snapshots.data.col(col);
    const double t = snapshots.time_stamps[static_cast<size_t>(col)];
    for (Index k = 0; k < k_total; ++k) {
      const Vector eta = fom.eval_integrand_contracted(state, t, k, psi);
      if (!eta.allFinite()) {
        throw std::invalid_argument(
            "assemble_constraints: non-finite integrand at point " +
            std::to_string(k) + " (element " +
            std::to_string(fom.quadrature().point_to_element[k]) + ")");
      }
      out.data.block(s * r, k, r, 1) = eta;
    }
  }

  out.rhs = out.data * fom.quadrature().weights;
  return out;
}

ConditionedConstraints condition_constraints(const ConstraintMatrix& g) {
  require(g.data.size() > 0, "condition_constraints: empty constraints");

  ConditionedConstraints out;

  // Row rescaling by the max absolute entry; zero rows are vacuous.
  std::vector<Index> kept;
  for (Index i = 0; i < g.data.rows(); ++i) {
    if (g.data.row(i).cwiseAbs().maxCoeff() > 0.0) {
      kept.push_back(i);
    } else {
      ++out.report.dropped_zero_rows;
    }
  }
  require(!kept.empty(), "condition_constraints: all rows are zero");

  Matrix scaled(static_cast<Index>(kept.size()), g.data.cols());
  Vector scaled_rhs(static_cast<Index>(kept.size()));
  out.row_scale.resize(static_cast<Index>(kept.size()));
  for (Index i = 0; i < scaled.rows(); ++i) {
    const double s = g.data.row(kept[i]).cwiseAbs().maxCoeff();
    out.row_scale(i) = s;
    scaled.row(i) = g.data.row(kept[i]) / s;
    scaled_rhs(i) = g.rhs(kept[i]) / s;
  }

  const LqResult fac = lq(scaled);
  out.report.dropped_dependent_rows = fac.dropped_rows;
  out.gc = fac.q;
  out.l = fac.l;
  out.kept_rows.reserve(fac.kept_rows.size());
  Vector surviving_rhs(static_cast<Index>(fac.kept_rows.size()));
  for (Index i = 0; i < static_cast<Index>(fac.kept_rows.size()); ++i) {
    out.kept_rows.push_back(kept[fac.kept_rows[i]]);
    surviving_rhs(i) = scaled_rhs(fac.kept_rows[i]);
  }
  out.rhs_c = fac.l.triangularView<Eigen::Lower>().solve(surviving_rhs);
  out.report.rows_out = out.gc.rows();
  return out;
}

SparseQuadratureRule solve_weights(const Matrix& gc, const Vector& rhs_c,
                                   const Vector& rho_full, double tol,
                                   Index max_points) {
  require(tol > 0.0, "solve_weights: tol must be > 0");
  require(gc.cols() == rho_full.size(), "solve_weights: weight length mismatch");

  const NnlsResult sol = nnls_lawson_hanson(gc, rhs_c, tol, 0, max_points);

  SparseQuadratureRule rule;
  rule.weights = sol.x;
  for (Index k = 0; k < sol.x.size(); ++k) {
    if (sol.x(k) != 0.0) rule.support.push_back(k);
  }
  rule.k_star = static_cast<Index>(rule.support.size());
  const double rhs_norm = rhs_c.norm();
  rule.achieved_residual = rhs_norm > 0.0 ? sol.residual / rhs_norm : 0.0;
  rule.tolerance_used = tol;
  rule.converged = sol.converged;
  rule.capped = sol.capped;
  return rule;
}

SparseQuadratureRule full_rule_as_sparse(const FullQuadratureRule& full) {
  SparseQuadratureRule rule;
  rule.weights = full.weights;
  rule.support.resize(full.n_points());
  for (Index k = 0; k < full.n_points(); ++k) rule.support[k] = k;
  rule.k_star = full.n_points();
  rule.converged = true;
  return rule;
}

Vector evaluate_sparse(const FomProblem& fom, const ReducedBasis& psi,
                       const SparseQuadratureRule& rule, const Vector& state,
                       double t) {
  require(rule.weights.size() == fom.quadrature().n_points(),
          "evaluate_sparse: rule/problem layout mismatch");
  Vector out = Vector::Zero(psi.retained);
  for (Index k : rule.support) {
    out += rule.weights(k) * fom.eval_integrand_contracted(state, t, k, psi);
  }
  return out;
}

std::set<Index> sample_mesh_from_rule(const SparseQuadratureRule& rule,
                                      const FullQuadratureRule& full) {
  std::set<Index> elements;
  for (Index k : rule.support) {
    require(k >= 0 && k < full.n_points(),
            "sample_mesh_from_rule: support index out of range");
    elements.insert(full.point_to_element[k]);
  }
  return elements;
}

}  // namespace hyperred
