// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hyperred/types.hpp"

namespace hyperred {

struct NnlsResult {
  Vector x;                 // entrywise nonnegative
  double residual = 0.0;    // ||b - A x||_2 at return
  Index iterations = 0;     // outer (column-entering) iterations
  bool converged = false;   // any stopping criterion met before max_iter
  bool dual_converged = false;      // max inactive dual <= tol * ||A^T b||_inf
  bool residual_converged = false;  // ||b - A x||_2 <= tol * ||b||_2
  bool capped = false;              // passive set hit max_support
};

/// Lawson-Hanson active-set solver for min ||A x - b||_2 s.t. x >= 0.
///
/// Stops at whichever of the dual and residual criteria above is met
/// first; both flags are reported. The passive-set least-squares
/// subproblem is solved by Householder QR. Ties in the entering-column
/// selection break to the lowest index.
///
/// max_iter = 0 selects the default of 3 * cols. max_support > 0 caps
/// the passive-set size; the best feasible iterate is returned with
/// `capped` set.
NnlsResult nnls_lawson_hanson(const Matrix& a, const Vector& b, double tol,
                              Index max_iter = 0, Index max_support = 0);

}  // namespace hyperred
