// SPDX-License-Identifier: Apache-2.0

#include "hyperred/nnls.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <limits>
#include <vector>

namespace hyperred {

namespace {

// Least squares on the passive-set columns, by Householder QR.
Vector passive_least_squares(const Matrix& a, const std::vector<Index>& passive,
                             const Vector& b) {
  Matrix ap(a.rows(), static_cast<Index>(passive.size()));
  for (Index j = 0; j < ap.cols(); ++j) ap.col(j) = a.col(passive[j]);
  return Eigen::ColPivHouseholderQR<Matrix>(ap).solve(b);
}

}  // namespace

NnlsResult nnls_lawson_hanson(const Matrix& a, const Vector& b, double tol,
                              Index max_iter, Index max_support) {
  require(a.size() > 0, "nnls: empty matrix");
  require(a.rows() == b.size(), "nnls: row/rhs mismatch");
  require(tol > 0.0, "nnls: tol must be > 0");
  require_finite(a, "nnls");
  require_finite(b, "nnls");

  const Index n = a.cols();
  if (max_iter <= 0) max_iter = 3 * n;
  if (max_support <= 0 || max_support > n) max_support = n;

  NnlsResult out;
  out.x = Vector::Zero(n);

  const double dual_scale = (a.transpose() * b).cwiseAbs().maxCoeff();
  const double rhs_scale = b.norm();
  const double dual_threshold = tol * dual_scale;
  const double residual_threshold = tol * rhs_scale;

  std::vector<Index> passive;
  std::vector<char> in_passive(n, 0);
  Vector residual_vec = b;

  auto finish = [&](bool hit_iter_cap) {
    out.residual = residual_vec.norm();
    const Vector w = a.transpose() * residual_vec;
    double max_dual = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      if (!in_passive[i]) max_dual = std::max(max_dual, w(i));
    }
    out.dual_converged =
        passive.size() == static_cast<size_t>(n) || max_dual <= dual_threshold;
    out.residual_converged = out.residual <= residual_threshold;
    out.converged = !hit_iter_cap && !out.capped &&
                    (out.dual_converged || out.residual_converged);
    return out;
  };

  if (rhs_scale == 0.0 || dual_scale == 0.0) return finish(false);

  while (true) {
    if (residual_vec.norm() <= residual_threshold) {
      return finish(false);
    }
    if (static_cast<Index>(passive.size()) >= max_support &&
        static_cast<Index>(passive.size()) < n) {
      out.capped = true;
      return finish(false);
    }

    // Entering column: largest positive dual, lowest index on ties.
    const Vector w = a.transpose() * residual_vec;
    Index enter = -1;
    double best = dual_threshold;
    for (Index i = 0; i < n; ++i) {
      if (!in_passive[i] && w(i) > best) {
        best = w(i);
        enter = i;
      }
    }
    if (enter < 0) return finish(false);

    if (out.iterations >= max_iter) return finish(true);
    ++out.iterations;

    passive.push_back(enter);
    in_passive[enter] = 1;

    // Inner loop: restore feasibility of the passive-set solution.
    while (true) {
      Vector z = passive_least_squares(a, passive, b);
      double zmin = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < z.size(); ++j) zmin = std::min(zmin, z(j));
      if (zmin > 0.0) {
        for (Index j = 0; j < z.size(); ++j) out.x(passive[j]) = z(j);
        break;
      }

      double alpha = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < z.size(); ++j) {
        if (z(j) <= 0.0) {
          const double xj = out.x(passive[j]);
          alpha = std::min(alpha, xj / (xj - z(j)));
        }
      }
      for (Index j = 0; j < z.size(); ++j) {
        out.x(passive[j]) += alpha * (z(j) - out.x(passive[j]));
      }

      std::vector<Index> still;
      for (Index j = 0; j < static_cast<Index>(passive.size()); ++j) {
        const Index col = passive[j];
        if (z(j) <= 0.0 && out.x(col) <= 1e-14) {
          out.x(col) = 0.0;
          in_passive[col] = 0;
        } else {
          still.push_back(col);
        }
      }
      if (still.size() == passive.size()) {
        // Nothing left the passive set; avoid spinning.
        out.x(passive.back()) = 0.0;
        in_passive[passive.back()] = 0;
        passive.pop_back();
        break;
      }
      passive = std::move(still);
      if (passive.empty()) break;
    }

    residual_vec = b - a * out.x;
  }
}

}  // namespace hyperred
