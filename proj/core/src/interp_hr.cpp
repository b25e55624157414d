// SPDX-License-Identifier: Apache-2.0

#include "hyperred/interp_hr.hpp"

#include "hyperred/numerics.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyperred {

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::deim: return "deim";
    case SamplerKind::qdeim_e: return "qdeim_e";
    case SamplerKind::sopt: return "sopt";
  }
  return "deim";
}

SamplerKind sampler_from_string(const std::string& name) {
  if (name == "deim") return SamplerKind::deim;
  if (name == "qdeim_e" || name == "qdeim") return SamplerKind::qdeim_e;
  if (name == "sopt") return SamplerKind::sopt;
  throw std::invalid_argument("unknown sampler: " + name);
}

Matrix sampled_rows(const Matrix& m, const SampleIndexSet& z) {
  Matrix out(z.size(), m.cols());
  for (Index k = 0; k < z.size(); ++k) {
    require(z.indices[k] >= 0 && z.indices[k] < m.rows(),
            "sampled_rows: index out of range");
    out.row(k) = m.row(z.indices[k]);
  }
  return out;
}

Vector sampled_entries(const Vector& v, const SampleIndexSet& z) {
  Vector out(z.size());
  for (Index k = 0; k < z.size(); ++k) out(k) = v(z.indices[k]);
  return out;
}

namespace {

void check_sampler_inputs(const ForceBasis& xi, Index n_f, Index min_rf) {
  require(xi.basis.size() > 0, "sampler: empty basis");
  require_finite(xi.basis, "sampler");
  require(xi.cols() >= min_rf, "sampler: basis has too few columns");
  require(n_f >= xi.cols(), "sampler: n_f must be >= r_f");
  require(n_f <= xi.rows(), "sampler: n_f exceeds row count");
}

Index argmax_abs_unselected(const Vector& v, const std::vector<char>& taken) {
  Index best = -1;
  double best_val = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (!taken[i] && std::abs(v(i)) > best_val) {
      best_val = std::abs(v(i));
      best = i;
    }
  }
  return best;
}

}  // namespace

SampleIndexSet deim_oversampled(const ForceBasis& xi, Index n_f) {
  check_sampler_inputs(xi, n_f, 1);
  const Index n = xi.rows();
  const Index r_f = xi.cols();

  SampleIndexSet z;
  z.source_basis_cols = r_f;
  std::vector<char> taken(n, 0);
  auto push = [&](Index i) {
    z.indices.push_back(i);
    taken[i] = 1;
  };

  push(argmax_abs_unselected(xi.basis.col(0), taken));
  if (n_f == 1) return z;

  // Gappy reconstruction of column j from the current samples, then the
  // residual-maximizing row enters.
  auto residual_step = [&](Index j) {
    const Matrix prev = xi.basis.leftCols(std::max<Index>(j, 1));
    const Matrix zt_prev = sampled_rows(prev, z);
    const Vector fz = sampled_entries(xi.basis.col(j), z);
    const Vector eps = prev * (pseudoinverse(zt_prev) * fz);
    push(argmax_abs_unselected(xi.basis.col(j) - eps, taken));
  };

  if (r_f == 1) {
    while (z.size() < n_f) residual_step(0);
    return z;
  }

  const Index n_iter = (n_f - 1 + r_f - 2) / (r_f - 1);  // ceil((n_f-1)/(r_f-1))
  for (Index j = 1; j < r_f; ++j) {
    for (Index l = 0; l < n_iter; ++l) {
      residual_step(j);
      if (z.size() == n_f) return z;
    }
  }
  return z;
}

SampleIndexSet gappypod_e(const ForceBasis& xi, Index n_f) {
  check_sampler_inputs(xi, n_f, 1);
  const Index n = xi.rows();
  const Index r_f = xi.cols();

  SampleIndexSet z;
  z.source_basis_cols = r_f;
  std::vector<char> taken(n, 0);

  // Initial points: first r_f pivots of the column-pivoted QR of Xi^T.
  const QrPivotResult qr = qr_column_pivoted(xi.basis.transpose());
  for (Index k = 0; k < r_f; ++k) {
    z.indices.push_back(qr.pivots[k]);
    taken[qr.pivots[k]] = 1;
  }

  while (z.size() < n_f) {
    const SvdResult svd = thin_svd(sampled_rows(xi.basis, z));
    const double s_last = svd.sigma(r_f - 1);
    const double s_prev = r_f >= 2 ? svd.sigma(r_f - 2) : s_last;
    const double gap = std::max(0.0, s_prev * s_prev - s_last * s_last);

    const Matrix w = svd.v.transpose() * xi.basis.transpose();  // r_f x N
    Index best = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double y = w.col(i).squaredNorm();
      const double wlast = w(r_f - 1, i);
      const double disc =
          std::max(0.0, (gap + y) * (gap + y) - 4.0 * gap * wlast * wlast);
      const double gain = gap + y - std::sqrt(disc);
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    z.indices.push_back(best);
    taken[best] = 1;
  }
  return z;
}

double s_measure(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const Index p = a.cols();
  Vector norms(p);
  for (Index k = 0; k < p; ++k) {
    norms(k) = a.col(k).norm();
    if (norms(k) == 0.0) return 0.0;
  }
  // det(A^T A) / prod ||a_k||^2 equals the determinant of the Gram matrix
  // of the normalized columns; stays in [0, 1].
  Matrix gram = a.transpose() * a;
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      gram(i, j) /= norms(i) * norms(j);
    }
  }
  const double det = Eigen::PartialPivLU<Matrix>(gram).determinant();
  if (!(det > 0.0)) return 0.0;
  return std::pow(det, 1.0 / (2.0 * static_cast<double>(p)));
}

SampleIndexSet sopt(const ForceBasis& xi, Index n_f) {
  check_sampler_inputs(xi, n_f, 1);
  const Index n = xi.rows();
  const Index r_f = xi.cols();

  SampleIndexSet z;
  z.source_basis_cols = r_f;
  std::vector<char> taken(n, 0);

  z.indices.push_back(argmax_abs_unselected(xi.basis.col(0), taken));
  taken[z.indices.back()] = 1;

  while (z.size() < n_f) {
    const Index step = z.size() + 1;
    const Index p = std::min(step, r_f);
    const Matrix cols = xi.basis.leftCols(p);
    const Matrix base = sampled_rows(cols, z);

    Matrix candidate(base.rows() + 1, p);
    candidate.topRows(base.rows()) = base;

    Index best = -1;
    double best_s = -1.0;
    for (Index i = 0; i < n; ++i) {
      if (taken[i]) continue;
      candidate.row(base.rows()) = cols.row(i);
      const double s = s_measure(candidate);
      // Scores within rounding noise are ties; the lowest index wins.
      if (s > best_s * (1.0 + 1e-12) + 1e-300) {
        best_s = s;
        best = i;
      }
    }
    z.indices.push_back(best);
    taken[best] = 1;
  }
  return z;
}

SampleIndexSet run_sampler(SamplerKind kind, const ForceBasis& xi, Index n_f) {
  switch (kind) {
    case SamplerKind::deim: return deim_oversampled(xi, n_f);
    case SamplerKind::qdeim_e: return gappypod_e(xi, n_f);
    case SamplerKind::sopt: return sopt(xi, n_f);
  }
  throw std::invalid_argument("run_sampler: bad kind");
}

Vector ObliqueProjector::reconstruct(const Vector& sampled_values) const {
  return force_basis.basis * (sampled_pinv * sampled_values);
}

ObliqueProjector build_projector(const ForceBasis& xi, const SampleIndexSet& z,
                                 const ReducedBasis* psi) {
  for (Index idx : z.indices) {
    require(idx >= 0 && idx < xi.rows(), "build_projector: index out of range");
  }
  ObliqueProjector out;
  out.force_basis = xi;
  out.samples = z;

  const Matrix zt_xi = sampled_rows(xi.basis, z);
  const SvdResult svd = thin_svd(zt_xi);
  out.rank_deficient =
      svd.sigma(svd.sigma.size() - 1) <= 1e-12 * svd.sigma(0);
  out.sampled_pinv = pseudoinverse(zt_xi);
  if (psi != nullptr) {
    out.contracted = psi->basis.transpose() * xi.basis * out.sampled_pinv;
  }
  return out;
}

ProjectionDiagnostics projection_error_diagnostics(const ForceBasis& xi,
                                                   const SampleIndexSet& z,
                                                   const Vector& f) {
  require(f.size() == xi.rows(), "projection_error_diagnostics: shape mismatch");

  const Matrix zt_xi = sampled_rows(xi.basis, z);
  const Matrix pinv = pseudoinverse(zt_xi);

  const Vector pf = xi.basis * (pinv * sampled_entries(f, z));
  const Vector f_orth = f - xi.basis * (xi.basis.transpose() * f);

  ProjectionDiagnostics d;
  d.error = (f - pf).norm();
  d.orthogonal_error = f_orth.norm();
  d.bound = pinv_norm2(zt_xi) * d.orthogonal_error;
  d.epsilon_norm = (pinv * sampled_entries(f_orth, z)).norm();

  // Absolute floor keeps the check meaningful when both sides are
  // rounding-level zero.
  d.within_bound = d.error <= d.bound * (1.0 + 1e-8) + 1e-14 * f.norm();
  const double lhs = d.error * d.error;
  const double rhs = d.orthogonal_error * d.orthogonal_error +
                     d.epsilon_norm * d.epsilon_norm;
  const double scale = std::max({lhs, rhs, 1e-300});
  d.identity_holds = std::abs(lhs - rhs) <= 1e-8 * scale;
  return d;
}

}  // namespace hyperred
