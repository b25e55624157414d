// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hyperred/types.hpp"

#include <vector>

namespace hyperred {

struct SvdResult {
  Matrix u;      // orthonormal columns, rows(a) x k
  Vector sigma;  // nonincreasing, nonnegative, length k = min(rows, cols)
  Matrix v;      // orthonormal columns, cols(a) x k
};

/// Thin SVD: a = u * diag(sigma) * v^T.
SvdResult thin_svd(const Matrix& a);

/// Moore-Penrose pseudoinverse via SVD. Singular values at or below
/// cutoff * sigma_max are treated as zero.
Matrix pseudoinverse(const Matrix& a, double cutoff = 1e-12);

/// Spectral norm of the pseudoinverse: reciprocal of the smallest
/// strictly positive singular value (0 for a zero matrix).
double pinv_norm2(const Matrix& a, double cutoff = 1e-12);

struct QrPivotResult {
  Matrix q;                   // orthonormal columns
  Matrix r;                   // upper triangular, |r_kk| nonincreasing
  std::vector<Index> pivots;  // a.col(pivots[k]) is the k-th factored column
};

/// Column-pivoted (rank-revealing) QR: a * P = q * r.
QrPivotResult qr_column_pivoted(const Matrix& a);

struct LqResult {
  Matrix l;  // lower triangular, kept_rows x kept_rows
  Matrix q;  // orthonormal rows, kept_rows x cols
  std::vector<Index> kept_rows;  // rows of the input that survived
  Index dropped_rows = 0;        // numerically dependent rows removed
};

/// LQ decomposition a = l * q with q q^T = I. Rows whose pivot in l falls
/// at or below 1e-12 of the largest are dropped and refactored.
LqResult lq(const Matrix& a);

}  // namespace hyperred
