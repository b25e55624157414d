// SPDX-License-Identifier: Apache-2.0

#include "hyperred/numerics.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>

namespace hyperred {

SvdResult thin_svd(const Matrix& a) {
  require(a.size() > 0, "thin_svd: empty matrix");
  require_finite(a, "thin_svd");
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return SvdResult{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Matrix pseudoinverse(const Matrix& a, double cutoff) {
  require(cutoff >= 0.0, "pseudoinverse: cutoff must be >= 0");
  if (a.size() == 0) return Matrix(a.cols(), a.rows());
  require_finite(a, "pseudoinverse");
  const SvdResult svd = thin_svd(a);
  const double smax = svd.sigma.size() > 0 ? svd.sigma(0) : 0.0;
  const double threshold = cutoff * smax;
  Vector inv_sigma = Vector::Zero(svd.sigma.size());
  for (Index i = 0; i < svd.sigma.size(); ++i) {
    if (svd.sigma(i) > threshold && svd.sigma(i) > 0.0) {
      inv_sigma(i) = 1.0 / svd.sigma(i);
    }
  }
  return svd.v * inv_sigma.asDiagonal() * svd.u.transpose();
}

double pinv_norm2(const Matrix& a, double cutoff) {
  if (a.size() == 0) return 0.0;
  const SvdResult svd = thin_svd(a);
  const double smax = svd.sigma.size() > 0 ? svd.sigma(0) : 0.0;
  const double threshold = cutoff * smax;
  double smallest_positive = 0.0;
  for (Index i = svd.sigma.size() - 1; i >= 0; --i) {
    if (svd.sigma(i) > threshold && svd.sigma(i) > 0.0) {
      smallest_positive = svd.sigma(i);
      break;
    }
  }
  return smallest_positive > 0.0 ? 1.0 / smallest_positive : 0.0;
}

QrPivotResult qr_column_pivoted(const Matrix& a) {
  require(a.size() > 0, "qr_column_pivoted: empty matrix");
  require_finite(a, "qr_column_pivoted");
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  const Index k = std::min(a.rows(), a.cols());
  QrPivotResult out;
  out.q = Matrix(qr.householderQ()).leftCols(k);
  out.r = qr.matrixR().topRows(k).template triangularView<Eigen::Upper>();
  const auto& perm = qr.colsPermutation().indices();
  out.pivots.resize(a.cols());
  // perm(k) is the original column factored at position k.
  for (Index k = 0; k < a.cols(); ++k) out.pivots[k] = perm(k);
  return out;
}

LqResult lq(const Matrix& a) {
  require(a.size() > 0, "lq: empty matrix");
  require_finite(a, "lq");

  std::vector<Index> kept(a.rows());
  for (Index i = 0; i < a.rows(); ++i) kept[i] = i;

  Matrix work = a;
  LqResult out;
  // A = L Q comes from the Householder QR of A^T; a near-zero diagonal
  // of L marks a row dependent on the ones above it. Drop and refactor.
  for (;;) {
    const Index m = work.rows();
    Eigen::HouseholderQR<Matrix> qr(work.transpose());
    Matrix r = qr.matrixQR()
                   .topRows(std::min(work.cols(), m))
                   .template triangularView<Eigen::Upper>();
    const Index k = std::min<Index>(m, r.rows());
    double max_diag = 0.0;
    for (Index i = 0; i < k; ++i) max_diag = std::max(max_diag, std::abs(r(i, i)));

    std::vector<Index> bad;
    for (Index i = 0; i < m; ++i) {
      const double d = i < k ? std::abs(r(i, i)) : 0.0;
      if (d <= 1e-12 * max_diag) bad.push_back(i);
    }
    if (bad.empty() || m == 1) {
      Matrix thin_q = Matrix(qr.householderQ()).leftCols(m);
      out.l = r.topRows(m).leftCols(m).transpose();
      out.q = thin_q.transpose();
      out.kept_rows = kept;
      return out;
    }

    std::vector<Index> next;
    Matrix reduced(m - static_cast<Index>(bad.size()), work.cols());
    Index w = 0;
    for (Index i = 0; i < m; ++i) {
      if (std::find(bad.begin(), bad.end(), i) == bad.end()) {
        reduced.row(w++) = work.row(i);
        next.push_back(kept[i]);
      }
    }
    out.dropped_rows += static_cast<Index>(bad.size());
    work = std::move(reduced);
    kept = std::move(next);
  }
}

}  // namespace hyperred
